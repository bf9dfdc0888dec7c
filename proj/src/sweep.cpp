#include "qilab/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qilab/covert.hpp"
#include "qilab/distinguish.hpp"
#include "qilab/gain.hpp"
#include "qilab/spes.hpp"

namespace qilab {

namespace {

using Params = std::map<std::string, double>;

double need(const Params& p, const std::string& name) {
    auto it = p.find(name);
    if (it == p.end()) throw ConfigError("missing parameter: " + name);
    return it->second;
}

double opt(const Params& p, const std::string& name, double fallback) {
    auto it = p.find(name);
    return it == p.end() ? fallback : it->second;
}

GaussianState load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open state file: " + path);
    nlohmann::json j;
    in >> j;
    int modes = j.at("modes").get<int>();
    std::string ord = j.value("ordering", "xxpp");
    Ordering ordering = ord == "xpxp" ? Ordering::XPXP : Ordering::XXPP;
    std::vector<double> mean = j.at("mean").get<std::vector<double>>();
    auto cov_rows = j.at("cov").get<std::vector<std::vector<double>>>();
    Eigen::VectorXd mu(2 * modes);
    Eigen::MatrixXd cov(2 * modes, 2 * modes);
    if (static_cast<int>(mean.size()) != 2 * modes ||
        static_cast<int>(cov_rows.size()) != 2 * modes)
        throw ConfigError("state file dimensions do not match modes");
    for (int i = 0; i < 2 * modes; ++i) {
        mu(i) = mean[i];
        if (static_cast<int>(cov_rows[i].size()) != 2 * modes)
            throw ConfigError("state file cov is not square");
        for (int k = 0; k < 2 * modes; ++k) cov(i, k) = cov_rows[i][k];
    }
    return GaussianState(modes, mu, cov, ordering);
}

struct SubcommandSpec {
    std::vector<std::string> columns;
    std::function<std::vector<double>(const SweepConfig&, const Params&)> row;
};

const std::map<std::string, SubcommandSpec>& registry() {
    static const std::map<std::string, SubcommandSpec> reg = [] {
        std::map<std::string, SubcommandSpec> r;

        r["perfect-covert"] = {
            {"n_b", "chi_tmsv_qc", "chi_tmsv_qb", "chi_tmsv_analytic", "chi_gcs_qc",
             "chi_gcs_qb", "chi_gcs_analytic", "ratio_qc"},
            [](const SweepConfig&, const Params& p) {
                double eta = need(p, "eta"), n_b = need(p, "n_b");
                auto [s0, s1] = tmsv_return_pair(eta, n_b, n_b);
                OverlapResult qc = chernoff(s0, s1);
                OverlapResult qb = bhattacharyya(s0, s1);
                AnalyticExponents an = analytic_exponents(eta, n_b);
                double gcs_qc = perfect_gcs_exponent(eta, n_b);
                double gcs_qb = gcs_bhattacharyya_exponent(eta, n_b, n_b);
                return std::vector<double>{n_b,    qc.exponent, qb.exponent, an.chi_tmsv,
                                           gcs_qc, gcs_qb,      an.chi_gcs,  qc.exponent / gcs_qc};
            }};

        r["covert-energy"] = {
            {"m", "ns_min", "ns_max"},
            [](const SweepConfig&, const Params& p) {
                int m = static_cast<int>(need(p, "m"));
                EnergyBand band = kkt_energy_band(need(p, "n_b"), m, need(p, "eps"),
                                                  need(p, "eta"), static_cast<int>(opt(p, "d", 0)));
                return std::vector<double>{static_cast<double>(m), band.ns_min, band.ns_max};
            }};

        r["covert-bound"] = {
            {"m", "pe_floor", "pe_tmsv", "pe_gcs", "ns_covert"},
            [](const SweepConfig&, const Params& p) {
                double eta = need(p, "eta"), n_b = need(p, "n_b"), eps = need(p, "eps");
                int m = static_cast<int>(need(p, "m"));
                double ns = max_covert_brightness(eta, n_b, m, eps);
                double floor = ecovert_error_floor(eta, n_b, m, eps);
                auto [s0, s1] = tmsv_return_pair(eta, n_b, ns);
                double pe_tmsv = 0.5 * std::exp(-m * chernoff(s0, s1).exponent);
                double pe_gcs = 0.5 * std::exp(-m * gcs_exponent(eta, n_b, ns));
                return std::vector<double>{static_cast<double>(m), floor, pe_tmsv, pe_gcs, ns};
            }};

        r["gain-qfi"] = {
            {"g", "k_nds", "k_coh", "j_hom", "j_het"},
            [](const SweepConfig&, const Params& p) {
                double n = need(p, "n"), m = need(p, "m"), g = need(p, "g");
                HomHetFi hh = fi_homodyne_heterodyne(n, m, g);
                return std::vector<double>{g, qfi_nds(n, m, g).k_g, qfi_coherent(n, m, g),
                                           hh.j_hom, hh.j_het};
            }};

        r["gain-mse"] = {
            {"g", "qcrb_num", "qcrb_coh", "mse_num", "mse_coh"},
            [](const SweepConfig&, const Params& p) {
                double n = need(p, "n"), m = need(p, "m"), g = need(p, "g");
                double eta_d = opt(p, "eta_d", 1.0);
                return std::vector<double>{g, 1.0 / qfi_nds(n, m, g).k_g,
                                           1.0 / qfi_coherent(n, m, g),
                                           mse_number(n, m, g, eta_d),
                                           mse_coherent(n, m, g, eta_d)};
            }};

        r["gain-threshold"] = {
            {"eta_d", "g_star"},
            [](const SweepConfig&, const Params& p) {
                double eta_d = need(p, "eta_d");
                return std::vector<double>{eta_d,
                                           threshold_gain(eta_d, need(p, "n"), need(p, "m"))};
            }};

        r["ecb"] = {
            {"g", "g_prime", "b_quantum", "b_classical", "ratio"},
            [](const SweepConfig&, const Params& p) {
                double n = need(p, "n");
                int m = static_cast<int>(need(p, "m"));
                double g = need(p, "g"), gp = need(p, "g_prime");
                BuresResult q = ecb_distance(n, m, g, gp);
                BuresResult c = cecb_distance(n, m, g, gp);
                return std::vector<double>{g, gp, q.distance, c.distance,
                                           c.distance / q.distance};
            }};

        r["spes"] = {
            {"n_s", "chi_spes", "chi_tmsv", "chi_coh", "chi_mmpc", "chi_mmpdc"},
            [](const SweepConfig&, const Params& p) {
                NpsScenario sc;
                sc.eta = need(p, "eta");
                sc.n_b = need(p, "n_b");
                sc.n_s = need(p, "n_s");
                sc.cutoff = static_cast<int>(opt(p, "cutoff", 0));
                double kappa_pc = opt(p, "kappa_pc", 0.0);
                double kappa_dc = opt(p, "kappa_dc", 0.5);
                // kappa_pc = 0 requests the splitter-optimized detector.
                double mmpc = kappa_pc > 0.0 ? mmpc_exponent(sc, kappa_pc)
                                             : mmpc_exponent_optimized(sc).chi;
                return std::vector<double>{sc.n_s,
                                           bhattacharyya_exponent_nps(NpsProbe::Spes, sc),
                                           bhattacharyya_exponent_nps(NpsProbe::Tmsv, sc),
                                           bhattacharyya_exponent_nps(NpsProbe::Coherent, sc),
                                           mmpc, mmpdc_exponent(sc, kappa_dc)};
            }};

        r["distinguish"] = {
            {"fidelity", "c_half", "chernoff", "s_star", "pe_lower", "pe_upper"},
            [](const SweepConfig& cfg, const Params&) {
                if (cfg.state_a.empty() || cfg.state_b.empty())
                    throw ConfigError("distinguish needs --state-a and --state-b");
                GaussianState a = load_state(cfg.state_a);
                GaussianState b = load_state(cfg.state_b);
                double f = fidelity_gaussian(a, b);
                OverlapResult ch = chernoff(a, b);
                auto [lo, hi] = fvg_bounds(f);
                return std::vector<double>{f, s_overlap_gaussian(a, b, 0.5), ch.value,
                                           ch.s_star, lo, hi};
            }};

        return r;
    }();
    return reg;
}

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, spec] : registry()) out.push_back(name);
        return out;
    }();
    return names;
}

std::vector<double> grid_points(const GridSpec& g) {
    if (g.count < 1) throw ConfigError("grid count must be >= 1");
    if (g.log_scale && (g.start <= 0.0 || g.stop <= 0.0))
        throw ConfigError("log grid needs positive endpoints");
    std::vector<double> pts(g.count);
    if (g.count == 1) {
        pts[0] = g.start;
        return pts;
    }
    for (int i = 0; i < g.count; ++i) {
        double t = static_cast<double>(i) / (g.count - 1);
        pts[i] = g.log_scale ? std::exp(std::log(g.start) + t * (std::log(g.stop / g.start)))
                             : g.start + t * (g.stop - g.start);
    }
    return pts;
}

Dataset run(const SweepConfig& config) {
    auto it = registry().find(config.subcommand);
    if (it == registry().end()) throw ConfigError("unknown subcommand: " + config.subcommand);
    const SubcommandSpec& spec = it->second;

    std::vector<std::vector<double>> axes;
    long total = 1;
    for (const auto& g : config.grids) {
        axes.push_back(grid_points(g));
        total *= static_cast<long>(axes.back().size());
    }

    Dataset ds;
    ds.columns = spec.columns;
    ds.rows.assign(total, {});
    ds.errors.assign(total, "");

    auto eval_row = [&](long idx) {
        Params p = config.params;
        long rem = idx;
        for (long gi = static_cast<long>(axes.size()) - 1; gi >= 0; --gi) {
            long n = static_cast<long>(axes[gi].size());
            p[config.grids[gi].name] = axes[gi][rem % n];
            rem /= n;
        }
        try {
            ds.rows[idx] = spec.row(config, p);
        } catch (const std::exception& e) {
            ds.rows[idx].assign(spec.columns.size(),
                                std::numeric_limits<double>::quiet_NaN());
            // Grid coordinates stay meaningful in failed rows.
            size_t gi = 0;
            for (const auto& g : config.grids) {
                for (size_t c = 0; c < spec.columns.size(); ++c)
                    if (spec.columns[c] == g.name) ds.rows[idx][c] = p.at(g.name);
                ++gi;
            }
            ds.errors[idx] = e.what();
        }
    };

    int threads = config.threads > 0
                      ? config.threads
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::min<long>(threads, total));
    if (threads <= 1) {
        for (long i = 0; i < total; ++i) eval_row(i);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (long i = next.fetch_add(1); i < total; i = next.fetch_add(1)) eval_row(i);
            });
        for (auto& th : pool) th.join();
    }
    return ds;
}

std::string emit(const Dataset& ds, const std::string& format) {
    if (ds.rows.empty()) throw IoError("emit: empty dataset");
    std::ostringstream out;
    if (format == "csv") {
        for (size_t c = 0; c < ds.columns.size(); ++c) out << ds.columns[c] << ",";
        out << "error\n";
        for (size_t rix = 0; rix < ds.rows.size(); ++rix) {
            for (double v : ds.rows[rix]) out << format_value(v) << ",";
            std::string err = ds.errors[rix];
            for (char& ch : err)
                if (ch == ',' || ch == '\n') ch = ';';
            out << err << "\n";
        }
        return out.str();
    }
    if (format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (size_t rix = 0; rix < ds.rows.size(); ++rix) {
            nlohmann::ordered_json row;
            for (size_t c = 0; c < ds.columns.size(); ++c) {
                double v = ds.rows[rix][c];
                if (std::isfinite(v))
                    row[ds.columns[c]] = v;
                else
                    row[ds.columns[c]] = format_value(v);
            }
            row["error"] = ds.errors[rix];
            arr.push_back(std::move(row));
        }
        return arr.dump(2) + "\n";
    }
    throw ConfigError("unknown format: " + format);
}

}  // namespace qilab
