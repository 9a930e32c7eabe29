#include "bohm/commands.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "bohm/chaos.hpp"
#include "bohm/output.hpp"
#include "bohm/parallel.hpp"
#include "bohm/pointvortex.hpp"

namespace bohm {

namespace {

using Json = nlohmann::ordered_json;

const char* kSeedColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                             "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

SuperpositionState state_from_config(const ExperimentConfig& c) {
    if (c.b_equals_c) return SuperpositionState::from_amplitude_ratio(c.a_over_b, c.gamma1,
                                                                      c.gamma2);
    return SuperpositionState(*c.amp_a, *c.amp_b, *c.amp_c, c.gamma1, c.gamma2);
}

PeriodicVortexPath path_from_config(const ExperimentConfig& c) {
    if (c.path_kind == PathKind::Stationary)
        return PeriodicVortexPath::stationary({c.path_center_x, c.path_center_y},
                                              c.path_period);
    return PeriodicVortexPath::ellipse(c.path_amplitude_x, c.path_amplitude_y, c.path_gamma1,
                                       c.path_gamma2);
}

Json json_point(PlanePoint p) { return Json{{"x", p.x}, {"y", p.y}}; }

Json json_record(const FixedPointRecord& rec) {
    Json j;
    j["location"] = json_point(rec.location);
    j["jacobian"] = {{rec.jacobian.a11, rec.jacobian.a12}, {rec.jacobian.a21, rec.jacobian.a22}};
    j["trace"] = rec.jacobian.trace();
    j["det"] = rec.jacobian.det();
    j["eigenvalues"] = {{{"re", rec.eigenvalues[0].real()}, {"im", rec.eigenvalues[0].imag()}},
                        {{"re", rec.eigenvalues[1].real()}, {"im", rec.eigenvalues[1].imag()}}};
    j["eigenvectors"] = {{{"x", rec.eigenvectors[0].vx}, {"y", rec.eigenvectors[0].vy}},
                         {{"x", rec.eigenvectors[1].vx}, {"y", rec.eigenvectors[1].vy}}};
    j["classification"] = to_string(rec.classification);
    j["residual"] = rec.residual;
    return j;
}

int run_guarded(const char* what, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << what << ": config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const DegenerateStateError& e) {
        std::cerr << what << ": " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << what << ": " << e.what() << "\n";
        return kExitRuntimeError;
    }
}

}  // namespace

std::unique_ptr<VelocityField> make_field(const ExperimentConfig& c) {
    if (c.model == ModelKind::Oscillator)
        return std::make_unique<BohmianField>(state_from_config(c));
    return std::make_unique<PointVortexField>(path_from_config(c));
}

std::vector<PlanePoint> make_seeds(const ExperimentConfig& c, const VelocityField& field) {
    if (c.seed_kind == SeedKind::List) return c.seed_list;
    std::vector<PlanePoint> seeds;
    std::optional<PlanePoint> rv;
    try {
        rv = field.vortex(0.0);
    } catch (const DegenerateStateError&) {
        rv.reset();
    }
    for (int i = 0; i < c.seed_nx; ++i) {
        for (int j = 0; j < c.seed_ny; ++j) {
            const double fx = c.seed_nx > 1 ? static_cast<double>(i) / (c.seed_nx - 1) : 0.5;
            const double fy = c.seed_ny > 1 ? static_cast<double>(j) / (c.seed_ny - 1) : 0.5;
            const PlanePoint p{c.seed_x_min + fx * (c.seed_x_max - c.seed_x_min),
                               c.seed_y_min + fy * (c.seed_y_max - c.seed_y_min)};
            if (rv && distance(p, *rv) < c.exclude_vortex_radius) continue;
            seeds.push_back(p);
        }
    }
    return seeds;
}

int cmd_section(const ExperimentConfig& config, const std::string& out_dir, int threads) {
    return run_guarded("section", [&] {
        const auto field = make_field(config);
        const auto seeds = make_seeds(config, *field);
        const SectionDataset data =
            stroboscopic_section(*field, seeds, config.section_periods, config.integrate,
                                 threads);

        std::ostringstream csv;
        csv << "seed_id,n,x,y,status\n";
        for (std::size_t s = 0; s < data.seeds.size(); ++s) {
            const auto& sec = data.seeds[s];
            for (std::size_t n = 0; n < sec.points.size(); ++n)
                csv << s << "," << n << "," << format_double(sec.points[n].x) << ","
                    << format_double(sec.points[n].y) << "," << to_string(sec.status) << "\n";
        }
        write_text_file(out_dir + "/section.csv", csv.str());

        SvgPlot plot("stroboscopic section");
        for (std::size_t s = 0; s < data.seeds.size(); ++s)
            plot.add_points(data.seeds[s].points, kSeedColors[s % std::size(kSeedColors)], 1.0);
        plot.write(out_dir + "/section.svg");
        return kExitOk;
    });
}

int cmd_vortex_path(const ExperimentConfig& config, const std::string& out_dir, int) {
    return run_guarded("vortex-path", [&] {
        if (config.model != ModelKind::Oscillator)
            throw ConfigError("experiment.model", "vortex-path requires the oscillator model");
        const SuperpositionState state = state_from_config(config);

        const int n = 512;
        std::ostringstream csv;
        csv << "t,x_v,y_v\n";
        std::vector<PlanePoint> curve;
        curve.reserve(n + 1);
        for (int i = 0; i <= n; ++i) {
            const double t = kTwoPi * i / n;
            const PlanePoint rv = vortex_position(state, t);
            curve.push_back(rv);
            if (i < n)
                csv << format_double(t) << "," << format_double(rv.x) << ","
                    << format_double(rv.y) << "\n";
        }
        write_text_file(out_dir + "/vortex.csv", csv.str());

        SvgPlot plot("vortex path over one period");
        plot.set_bounds(-0.5, 0.5, -0.5, 0.5);
        plot.add_polyline(curve, "#1f77b4", 1.5);
        plot.add_marker(curve.front(), "#d62728", 4.0);
        plot.write(out_dir + "/vortex.svg");
        return kExitOk;
    });
}

int cmd_fixed_point(const ExperimentConfig& config, const std::string& out_dir, int threads) {
    return run_guarded("fixed-point", [&] {
        const auto field = make_field(config);
        NewtonOptions options;
        options.tol = config.newton_tol;
        options.max_iter = config.newton_max_iter;

        Json report;
        report["model"] = config.model == ModelKind::Oscillator ? "oscillator" : "point_vortex";
        report["newton_tol"] = config.newton_tol;
        report["fixed_points"] = Json::array();
        report["failed_guesses"] = Json::array();

        if (config.fixed_point_guess) {
            try {
                const auto rec =
                    find_fixed_point(*field, *config.fixed_point_guess, options,
                                     config.integrate);
                report["fixed_points"].push_back(json_record(rec));
            } catch (const std::runtime_error& e) {
                report["failed_guesses"].push_back(
                    {{"guess", json_point(*config.fixed_point_guess)}, {"error", e.what()}});
            }
        } else {
            const auto records = search_fixed_points(*field, 7, {0.0, 0.0}, {1.2, 1.2},
                                                     options, config.integrate, threads);
            for (const auto& rec : records) report["fixed_points"].push_back(json_record(rec));
        }
        write_text_file(out_dir + "/fixed_points.json", report.dump(2) + "\n");
        return kExitOk;
    });
}

int cmd_manifolds(const ExperimentConfig& config, const std::string& out_dir, int threads) {
    return run_guarded("manifolds", [&] {
        const auto field = make_field(config);
        NewtonOptions options;
        options.tol = config.newton_tol;
        options.max_iter = config.newton_max_iter;

        // Locate the saddle: configured guess, or grid search.
        std::optional<FixedPointRecord> saddle;
        if (config.fixed_point_guess) {
            const auto rec =
                find_fixed_point(*field, *config.fixed_point_guess, options, config.integrate);
            if (rec.classification == FixedPointClass::Saddle) saddle = rec;
        } else {
            for (const auto& rec : search_fixed_points(*field, 7, {0.0, 0.0}, {1.2, 1.2},
                                                       options, config.integrate, threads))
                if (rec.classification == FixedPointClass::Saddle) {
                    saddle = rec;
                    break;
                }
        }
        if (!saddle) throw std::runtime_error("no saddle fixed point found");

        ManifoldParams params;
        params.seed_delta = config.manifold_seed_delta;
        params.max_arclength = config.manifold_max_arclength;
        params.max_spacing = config.manifold_max_spacing;

        const struct {
            ManifoldSide side;
            BranchSign sign;
        } branches[] = {{ManifoldSide::Unstable, BranchSign::Plus},
                        {ManifoldSide::Unstable, BranchSign::Minus},
                        {ManifoldSide::Stable, BranchSign::Plus},
                        {ManifoldSide::Stable, BranchSign::Minus}};
        std::vector<ManifoldPolyline> polylines(4);
        parallel_for(4, threads, [&](std::size_t i) {
            polylines[i] = trace_manifold(*field, *saddle, branches[i].side, branches[i].sign,
                                          params, config.integrate);
        });

        std::ostringstream csv;
        csv << "side,sign,idx,x,y,gap_after\n";
        for (const auto& poly : polylines) {
            std::size_t next_break = 0;
            for (std::size_t i = 0; i < poly.points.size(); ++i) {
                while (next_break < poly.break_after.size() && poly.break_after[next_break] < i)
                    ++next_break;
                const bool gap = next_break < poly.break_after.size() &&
                                 poly.break_after[next_break] == i;
                csv << to_string(poly.side) << "," << to_string(poly.sign) << "," << i << ","
                    << format_double(poly.points[i].x) << "," << format_double(poly.points[i].y)
                    << "," << (gap ? 1 : 0) << "\n";
            }
        }
        write_text_file(out_dir + "/manifolds.csv", csv.str());

        // Crossings between every stable/unstable branch pair.
        Json report;
        report["fixed_point"] = json_record(*saddle);
        report["transversality_tol"] = config.transversality_tol;
        report["crossings"] = Json::array();
        for (int s = 2; s < 4; ++s) {
            for (int u = 0; u < 2; ++u) {
                const auto found = detect_homoclinic(polylines[s], polylines[u],
                                                     config.transversality_tol);
                for (const auto& crossing : found) {
                    Json j;
                    j["location"] = json_point(crossing.location);
                    j["angle_rad"] = crossing.angle;
                    j["stable_branch"] = to_string(polylines[s].sign);
                    j["unstable_branch"] = to_string(polylines[u].sign);
                    j["stable_segment"] = crossing.stable_segment;
                    j["unstable_segment"] = crossing.unstable_segment;
                    report["crossings"].push_back(j);
                }
            }
        }
        write_text_file(out_dir + "/crossings.json", report.dump(2) + "\n");

        SvgPlot plot("invariant manifolds");
        if (config.section_periods > 0) {
            const auto seeds = make_seeds(config, *field);
            if (!seeds.empty()) {
                const auto section = stroboscopic_section(*field, seeds,
                                                          config.section_periods,
                                                          config.integrate, threads);
                for (const auto& sec : section.seeds) plot.add_points(sec.points, "#dddddd", 0.8);
            }
        }
        plot.add_polyline(polylines[0].points, "#d62728", 1.2);
        plot.add_polyline(polylines[1].points, "#ff9896", 1.2);
        plot.add_polyline(polylines[2].points, "#1f77b4", 1.2);
        plot.add_polyline(polylines[3].points, "#aec7e8", 1.2);
        plot.add_marker(saddle->location, "#000000", 5.0);
        for (const auto& item : report["crossings"])
            plot.add_marker(PlanePoint{item["location"]["x"].get<double>(),
                                       item["location"]["y"].get<double>()},
                            "#2ca02c", 3.0);
        plot.write(out_dir + "/manifolds.svg");
        return kExitOk;
    });
}

int cmd_lyapunov(const ExperimentConfig& config, const std::string& out_dir, int threads) {
    return run_guarded("lyapunov", [&] {
        const auto field = make_field(config);
        const auto seeds = make_seeds(config, *field);
        const double t0 = field->period();
        const double total = config.lyapunov_periods * t0;

        std::vector<LyapunovResult> results(seeds.size());
        parallel_for(seeds.size(), threads, [&](std::size_t i) {
            results[i] = lyapunov_exponent(*field, seeds[i], total, t0, config.integrate);
        });

        std::ostringstream csv;
        csv << "seed_id,x0,y0,lambda_per_unit_time,lambda_per_period,time_used,status\n";
        int chaotic = 0;
        double mean = 0.0;
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const auto& r = results[i];
            csv << i << "," << format_double(seeds[i].x) << "," << format_double(seeds[i].y)
                << "," << format_double(r.per_unit_time) << "," << format_double(r.per_period)
                << "," << format_double(r.time_used) << ","
                << (r.partial ? "partial" : "completed") << "\n";
            if (!r.partial && r.per_period > config.chaos_threshold_per_period) ++chaotic;
            mean += r.per_period;
        }
        write_text_file(out_dir + "/lyapunov.csv", csv.str());

        Json summary;
        summary["periods"] = config.lyapunov_periods;
        summary["threshold_per_period"] = config.chaos_threshold_per_period;
        summary["n_seeds"] = seeds.size();
        summary["chaotic_fraction"] =
            seeds.empty() ? 0.0 : static_cast<double>(chaotic) / seeds.size();
        summary["mean_lambda_per_period"] = seeds.empty() ? 0.0 : mean / seeds.size();
        write_text_file(out_dir + "/lyapunov.json", summary.dump(2) + "\n");
        return kExitOk;
    });
}

int cmd_scan(const ExperimentConfig& config, const std::string& out_dir, int threads) {
    return run_guarded("scan", [&] {
        if (config.model != ModelKind::Oscillator)
            throw ConfigError("experiment.model", "scan requires the oscillator model");
        if (config.scan_ratios.empty())
            throw ConfigError("scan.ratios", "scan needs at least one a/b ratio");

        std::vector<SuperpositionState> states;
        for (double ratio : config.scan_ratios)
            states.push_back(
                SuperpositionState::from_amplitude_ratio(ratio, config.gamma1, config.gamma2));

        const BohmianField field0(states.front());
        const auto seeds = make_seeds(config, field0);

        ScanOptions options;
        options.chaos_threshold_per_period = config.chaos_threshold_per_period;
        options.n_threads = threads;
        const auto summaries =
            scan_transition(states, seeds, config.scan_periods, options, config.integrate);

        std::ostringstream csv;
        csv << "state_id,a_over_b,chaotic_fraction,mean_lambda_per_period,threshold_per_period,"
               "n_seeds,section_csv\n";
        for (std::size_t k = 0; k < summaries.size(); ++k) {
            const auto& s = summaries[k];
            const std::string section_name = "scan_section_" + std::to_string(k) + ".csv";
            csv << k << "," << format_double(config.scan_ratios[k]) << ","
                << format_double(s.chaotic_fraction) << ","
                << format_double(s.mean_lambda_per_period) << ","
                << format_double(s.threshold_per_period) << "," << s.seeds.size() << ","
                << section_name << "\n";

            std::ostringstream section_csv;
            section_csv << "seed_id,n,x,y,status\n";
            for (std::size_t i = 0; i < s.section.seeds.size(); ++i)
                for (std::size_t n = 0; n < s.section.seeds[i].points.size(); ++n)
                    section_csv << i << "," << n << ","
                                << format_double(s.section.seeds[i].points[n].x) << ","
                                << format_double(s.section.seeds[i].points[n].y) << ","
                                << to_string(s.section.seeds[i].status) << "\n";
            write_text_file(out_dir + "/" + section_name, section_csv.str());

            SvgPlot plot("section, a/b = " + format_double(config.scan_ratios[k]));
            for (std::size_t i = 0; i < s.section.seeds.size(); ++i)
                plot.add_points(s.section.seeds[i].points,
                                kSeedColors[i % std::size(kSeedColors)], 1.0);
            plot.write(out_dir + "/scan_section_" + std::to_string(k) + ".svg");
        }
        write_text_file(out_dir + "/scan.csv", csv.str());
        return kExitOk;
    });
}

}  // namespace bohm
