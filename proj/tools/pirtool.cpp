#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "pirlift/audit.hpp"

using namespace pirlift;

namespace {

int write_out(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::cerr << "cannot open " << out_path << " for writing\n";
        return 2;
    }
    f << text;
    return 0;
}

int cmd_symbolic(int N, int r, int M, const std::string& out, const std::string& golden) {
    std::string text = to_text(build_symbolic(N, r, M));
    if (!golden.empty()) {
        std::ifstream g(golden, std::ios::binary);
        if (!g) {
            std::cerr << "cannot open golden file " << golden << "\n";
            return 2;
        }
        std::ostringstream os;
        os << g.rdbuf();
        if (os.str() != text) {
            std::cerr << "symbolic matrix differs from " << golden << "\n";
            return 1;
        }
        std::cout << "match " << golden << "\n";
        return 0;
    }
    return write_out(text, out);
}

int cmd_rates(int N, int K, int T, int r, int M, const std::string& out) {
    int r_lift = r >= 0 ? r : K + T - 1;
    std::ostringstream os;
    os << "N,K,T,M,r,formula,value_exact,value_decimal\n";
    auto row = [&](int Mv, int rv, const char* formula, const Rational& val) {
        os << N << "," << K << "," << T << "," << Mv << "," << rv << "," << formula << ","
           << val.to_string() << "," << val.to_decimal(6) << "\n";
    };
    for (int Mv = 2; Mv <= M; ++Mv) {
        row(Mv, T, "capacity", capacity(N, T, Mv));
        row(Mv, r_lift, "lifted", lifted_closed_rate(N, r_lift, Mv));
        row(Mv, r_lift, "oneshot", Rational(N - r_lift, N));
        if (K + T <= N) {
            row(Mv, N * K - N + T, "taje", taje_rate(N, K, T, Mv));
            row(Mv, K + T - 1, "holl", holl_rate(N, K, T, Mv));
        }
    }
    return write_out(os.str(), out);
}

int cmd_sim(const std::string& config_path, long long seed_override, int trials,
            const std::string& out) {
    SchemeConfig cfg = SchemeConfig::load(config_path);
    if (seed_override >= 0) cfg.seed = (std::uint64_t)seed_override;
    std::ostringstream os;
    os << "config " << config_path << "\n"
       << "kind " << cfg.kind << " pipeline " << cfg.pipeline << " N " << cfg.N << " K "
       << cfg.K << " T " << cfg.T << " M " << cfg.M << " q " << cfg.q << " seed " << cfg.seed
       << "\n";
    if (cfg.pipeline == "oneshot") {
        OneShotScheme s = build_scheme(cfg);
        os << "r " << s.params.r << "\n"
           << "rate " << oneshot_rate(s).to_string() << "\n";
    } else {
        DecodingPlan plan = build_plan_for(cfg);
        os << "r " << plan.symbolic.r << "\n"
           << "rate " << measured_rate(plan).to_string() << "\n"
           << "queries_total " << plan.total_slots() << "\n"
           << "queries_informative " << plan.message_length() << "\n"
           << "queries_per_server";
        for (const auto& list : plan.server_slots) os << " " << list.size();
        os << "\n";
    }
    CheckResult res = correctness_suite(cfg, trials, cfg.seed);
    os << "correctness " << (res.pass ? "pass" : "fail") << " (" << trials
       << " trials): " << res.detail << "\n";
    int rc = write_out(os.str(), out);
    return rc != 0 ? rc : (res.pass ? 0 : 1);
}

int cmd_audit(const std::string& mode, const std::string& config_path, long long trials,
              double significance, long long seed_override, bool corrupt, bool biased,
              const std::string& out) {
    SchemeConfig cfg = SchemeConfig::load(config_path);
    if (seed_override >= 0) cfg.seed = (std::uint64_t)seed_override;
    std::ostringstream os;
    bool pass = false;
    if (mode == "exact") {
        CheckResult res = privacy_exact_check(cfg);
        pass = res.pass;
        os << "privacy_exact " << (pass ? "pass" : "fail") << ": " << res.detail << "\n";
    } else if (mode == "stat") {
        PrivacyStats st = privacy_statistical_check(cfg, trials, significance, biased);
        pass = st.pass;
        os << "privacy_statistical " << (pass ? "pass" : "fail")
           << (st.inconclusive ? " (inconclusive)" : "") << ": " << st.detail << "\n";
    } else if (mode == "correctness") {
        CheckResult res = correctness_suite(cfg, (int)trials, cfg.seed, corrupt);
        pass = res.pass;
        os << "correctness " << (pass ? "pass" : "fail") << ": " << res.detail << "\n";
    } else {
        std::cerr << "unknown audit mode '" << mode << "'\n";
        return 2;
    }
    int rc = write_out(os.str(), out);
    return rc != 0 ? rc : (pass ? 0 : 1);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-shot PIR construction, refinement/lifting, simulation and audits"};
    app.require_subcommand(1);

    int N = 0, K = 1, T = 1, M = 2, r = -1, trials = 100;
    long long seed = -1, stat_trials = 10000;
    double significance = 0.01;
    bool corrupt = false, biased = false;
    std::string out, golden, config_path, mode;

    auto* sym = app.add_subcommand("symbolic", "emit or check a symbolic query matrix");
    sym->add_option("--N", N)->required();
    sym->add_option("--r", r)->required();
    sym->add_option("--M", M)->required();
    sym->add_option("--out", out);
    sym->add_option("--golden", golden);

    auto* rates = app.add_subcommand("rates", "closed-form rate table as CSV");
    rates->add_option("--N", N)->required();
    rates->add_option("--K", K);
    rates->add_option("--T", T);
    rates->add_option("--r", r);
    rates->add_option("--M", M, "emit rows for M = 2..M");
    rates->add_option("--out", out);

    auto* sim = app.add_subcommand("sim", "build a scheme and run retrieval trials");
    sim->add_option("--config", config_path)->required();
    sim->add_option("--seed", seed);
    sim->add_option("--trials", trials);
    sim->add_option("--out", out);

    auto* audit = app.add_subcommand("audit", "correctness / privacy audits");
    audit->add_option("--mode", mode, "exact | stat | correctness")->required();
    audit->add_option("--config", config_path)->required();
    audit->add_option("--trials", stat_trials);
    audit->add_option("--significance", significance);
    audit->add_option("--seed", seed);
    audit->add_flag("--corrupt", corrupt, "inject a response error (negative control)");
    audit->add_flag("--biased", biased, "bias the noise sampler (negative control)");
    audit->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sym->parsed()) return cmd_symbolic(N, r, M, out, golden);
        if (rates->parsed()) return cmd_rates(N, K, T, r, M, out);
        if (sim->parsed()) return cmd_sim(config_path, seed, trials, out);
        if (audit->parsed())
            return cmd_audit(mode, config_path, stat_trials, significance, seed, corrupt,
                             biased, out);
    } catch (const ParamError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible parameters: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
