#include "pirlift/config.hpp"

#include <fstream>
#include <sstream>

namespace pirlift {

namespace {

std::vector<long long> parse_row(std::istringstream& is, int n, const std::string& what) {
    std::vector<long long> row(n);
    for (auto& e : row)
        if (!(is >> e)) throw ParamError("config: truncated " + what + " row");
    return row;
}

} // namespace

SchemeConfig SchemeConfig::parse(const std::string& text) {
    SchemeConfig cfg;
    std::istringstream in(text);
    std::string line;
    int pending_rows = 0;
    std::vector<std::vector<long long>>* pending = nullptr;
    std::string pending_what;
    int pending_width = 0;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        std::string key;
        if (!(is >> key)) continue;
        if (pending_rows > 0) {
            std::istringstream row_is(line);
            pending->push_back(parse_row(row_is, pending_width, pending_what));
            --pending_rows;
            continue;
        }
        if (key == "kind") is >> cfg.kind;
        else if (key == "pipeline") is >> cfg.pipeline;
        else if (key == "N") is >> cfg.N;
        else if (key == "K") is >> cfg.K;
        else if (key == "T") is >> cfg.T;
        else if (key == "M") is >> cfg.M;
        else if (key == "q") is >> cfg.q;
        else if (key == "r") is >> cfg.r;
        else if (key == "seed") is >> cfg.seed;
        else if (key == "validate") is >> cfg.validate;
        else if (key == "generator") {
            cfg.generator.emplace();
            pending = &*cfg.generator;
            pending_rows = cfg.K;
            pending_width = cfg.N;
            pending_what = "generator";
        } else if (key == "lambda") {
            cfg.lambda.emplace();
            pending = &*cfg.lambda;
            pending_rows = cfg.N;
            pending_width = 0; // variable; read whole lines
            pending_what = "lambda";
        } else if (key == "mixed") {
            int p;
            while (is >> p) cfg.mixed.push_back(p);
        } else {
            throw ParamError("config: unknown key '" + key + "'");
        }
        if (pending_what == "lambda" && pending_rows > 0 && pending_width == 0) {
            // lambda rows have a uniform, but not pre-declared, width:
            // read them as full lines.
            while (pending_rows > 0 && std::getline(in, line)) {
                auto h2 = line.find('#');
                if (h2 != std::string::npos) line.erase(h2);
                std::istringstream row_is(line);
                std::vector<long long> row;
                long long e;
                while (row_is >> e) row.push_back(e);
                if (row.empty()) continue;
                if (!pending->empty() && row.size() != pending->front().size())
                    throw ParamError("config: ragged lambda rows");
                pending->push_back(std::move(row));
                --pending_rows;
            }
            if (pending_rows > 0) throw ParamError("config: truncated lambda rows");
            pending_what.clear();
        }
        if (pending_rows == 0) pending_what.clear();
    }
    if (pending_rows > 0) throw ParamError("config: truncated " + pending_what + " rows");
    if (cfg.N < 2) throw ParamError("config: N missing or < 2");
    return cfg;
}

SchemeConfig SchemeConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParamError("config: cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse(os.str());
}

std::string SchemeConfig::to_text() const {
    std::ostringstream os;
    os << "kind " << kind << "\n"
       << "pipeline " << pipeline << "\n"
       << "N " << N << "\nK " << K << "\nT " << T << "\nM " << M << "\nq " << q << "\n";
    if (r >= 0) os << "r " << r << "\n";
    os << "seed " << seed << "\n";
    if (!validate) os << "validate 0\n";
    if (generator) {
        os << "generator\n";
        for (const auto& row : *generator) {
            for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
            os << "\n";
        }
    }
    if (lambda) {
        os << "lambda\n";
        for (const auto& row : *lambda) {
            for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
            os << "\n";
        }
    }
    if (!mixed.empty()) {
        os << "mixed";
        for (int p : mixed) os << " " << p;
        os << "\n";
    }
    return os.str();
}

OneShotScheme build_scheme(const SchemeConfig& cfg) {
    if (cfg.kind == "secret_sharing") {
        if (cfg.K != 1) throw ParamError("config: secret_sharing requires K = 1");
        return build_secret_sharing_oneshot(cfg.N, cfg.T, cfg.M, cfg.q);
    }
    if (cfg.kind == "geometrical") {
        GeneratorSpec G = cfg.generator
                              ? GeneratorSpec::from_coefficients(cfg.K, cfg.N, cfg.q,
                                                                 *cfg.generator)
                          : (cfg.N == 4 && cfg.K == 2)
                              ? GeneratorSpec::coded_4_2_preset(cfg.q)
                              : GeneratorSpec::default_for(cfg.N, cfg.K, cfg.q);
        return build_geometrical_oneshot(cfg.N, cfg.K, cfg.T, cfg.q, G);
    }
    if (cfg.kind == "explicit") {
        if (!cfg.lambda) {
            if (cfg.N == 4 && cfg.K == 2 && cfg.T == 2) return build_explicit_422(cfg.q);
            throw ParamError("config: explicit kind needs lambda rows");
        }
        GeneratorSpec G = cfg.generator
                              ? GeneratorSpec::from_coefficients(cfg.K, cfg.N, cfg.q,
                                                                 *cfg.generator)
                          : (cfg.N == 4 && cfg.K == 2)
                              ? GeneratorSpec::coded_4_2_preset(cfg.q)
                              : GeneratorSpec::default_for(cfg.N, cfg.K, cfg.q);
        int d = (int)cfg.lambda->front().size();
        FpMat lambda(cfg.N, d, cfg.q);
        for (int i = 0; i < cfg.N; ++i) {
            if ((int)(*cfg.lambda)[i].size() != d) throw ParamError("config: ragged lambda");
            for (int t = 0; t < d; ++t) lambda.at(i, t) = fp_reduce((*cfg.lambda)[i][t], cfg.q);
        }
        std::vector<int> mixed = cfg.mixed;
        if (mixed.empty()) throw ParamError("config: explicit kind needs mixed positions");
        int r = cfg.N - (int)mixed.size();
        PirParams params{cfg.N, cfg.K, cfg.T, cfg.M, cfg.q, r, (long long)cfg.K};
        return build_explicit_oneshot(params, G, lambda, mixed, cfg.validate);
    }
    throw ParamError("config: unknown kind '" + cfg.kind + "'");
}

DecodingPlan build_plan_for(const SchemeConfig& cfg) {
    OneShotScheme s = build_scheme(cfg);
    if (cfg.r >= 0 && cfg.r != s.params.r)
        throw ParamError("config: r does not match the construction's codimension");
    return build_plan(build_symbolic(cfg.N, s.params.r, cfg.M), s);
}

} // namespace pirlift
