#include "hardcore/io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "hardcore/errors.hpp"

namespace hardcore {

using nlohmann::json;

namespace {

const json& need(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key))
        throw InvalidInput(std::string(what) + ": missing \"" + key + "\"");
    return j.at(key);
}

std::vector<std::string> parse_label_array(const json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw InvalidInput(std::string(what) + " must be a nonempty array of strings");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& e : j) {
        if (!e.is_string()) throw InvalidInput(std::string(what) + " entries must be strings");
        std::string s = e.get<std::string>();
        if (s.empty()) throw InvalidInput(std::string(what) + " entries must be nonempty");
        if (!seen.insert(s).second)
            throw InvalidInput(std::string(what) + " has a duplicate entry: " + s);
        out.push_back(std::move(s));
    }
    return out;
}

double parse_positive_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw InvalidInput(what + " must be a number");
    const double x = j.get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInput(what + " must be positive and finite");
    return x;
}

int lookup_label(const std::vector<std::string>& labels, const std::string& s, const char* what) {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == s) return static_cast<int>(i);
    throw InvalidInput(std::string(what) + " references unknown vertex: " + s);
}

std::pair<int, int> parse_label_edge(const json& e, const std::vector<std::string>& labels,
                                     const char* what) {
    if (!e.is_array() || e.size() != 2)
        throw InvalidInput(std::string(what) + " entries must be [from, to] pairs");
    if (!e[0].is_string() || !e[1].is_string())
        throw InvalidInput(std::string(what) + " endpoints must be vertex labels");
    return {lookup_label(labels, e[0].get<std::string>(), what),
            lookup_label(labels, e[1].get<std::string>(), what)};
}

std::vector<double> parse_lambda_map(const json& j, const std::vector<std::string>& labels) {
    std::vector<double> lam(labels.size(), 1.0);
    if (!j.contains("lambda")) return lam;
    const json& m = j.at("lambda");
    if (!m.is_object()) throw InvalidInput("\"lambda\" must be an object keyed by vertex label");
    for (const auto& [key, val] : m.items()) {
        const int idx = lookup_label(labels, key, "\"lambda\"");
        lam[static_cast<std::size_t>(idx)] = parse_positive_number(val, "activity of " + key);
    }
    return lam;
}

} // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput("invalid JSON in " + path + ": " + e.what());
    }
}

std::pair<FiniteGraph, ActivityMap> parse_finite_graph(const json& j) {
    if (!j.is_object()) throw InvalidInput("graph description must be a JSON object");
    const auto labels = parse_label_array(need(j, "vertices", "graph"), "\"vertices\"");
    FiniteGraph g(labels.size(), std::vector<std::string>(labels));
    if (j.contains("edges")) {
        const json& es = j.at("edges");
        if (!es.is_array()) throw InvalidInput("\"edges\" must be an array");
        for (const auto& e : es) {
            auto [u, v] = parse_label_edge(e, labels, "\"edges\"");
            g.add_edge(u, v);
        }
    }
    ActivityMap lam;
    lam.values = parse_lambda_map(j, labels);
    return {std::move(g), std::move(lam)};
}

PeriodicGraph parse_periodic_graph(const json& j) {
    if (!j.is_object()) throw InvalidInput("periodic graph description must be a JSON object");
    const json& group = need(j, "group", "periodic graph");
    if (!group.is_object() || !group.contains("type") || !group.at("type").is_string() ||
        group.at("type").get<std::string>() != "Zd")
        throw InvalidInput("\"group\" must be {\"type\": \"Zd\", \"d\": <int>}");
    const json& dj = need(group, "d", "\"group\"");
    if (!dj.is_number_integer()) throw InvalidInput("group dimension must be an integer");
    const int d = dj.get<int>();
    if (d < 1 || d > kMaxDim)
        throw InvalidInput("group dimension must be between 1 and " + std::to_string(kMaxDim));

    const auto labels = parse_label_array(need(j, "domain", "periodic graph"), "\"domain\"");

    std::vector<std::pair<int, int>> internal;
    if (j.contains("internal_edges")) {
        const json& es = j.at("internal_edges");
        if (!es.is_array()) throw InvalidInput("\"internal_edges\" must be an array");
        for (const auto& e : es) internal.push_back(parse_label_edge(e, labels, "\"internal_edges\""));
    }

    std::vector<CrossEdge> cross;
    if (j.contains("cross_edges")) {
        const json& es = j.at("cross_edges");
        if (!es.is_array()) throw InvalidInput("\"cross_edges\" must be an array");
        for (const auto& e : es) {
            if (!e.is_object())
                throw InvalidInput("\"cross_edges\" entries must be objects");
            CrossEdge ce;
            ce.u = lookup_label(labels, need(e, "from", "cross edge").get<std::string>(),
                                "\"cross_edges\"");
            ce.v = lookup_label(labels, need(e, "to", "cross edge").get<std::string>(),
                                "\"cross_edges\"");
            const json& off = need(e, "offset", "cross edge");
            if (!off.is_array() || static_cast<int>(off.size()) != d)
                throw InvalidInput("cross edge offset must be an array of length d");
            for (int k = 0; k < d; ++k) {
                if (!off[static_cast<std::size_t>(k)].is_number_integer())
                    throw InvalidInput("cross edge offsets must be integers");
                const long long x = off[static_cast<std::size_t>(k)].get<long long>();
                if (x < -1000000 || x > 1000000)
                    throw InvalidInput("cross edge offset out of supported range");
                ce.delta[k] = static_cast<std::int32_t>(x);
            }
            cross.push_back(ce);
        }
    }

    std::vector<double> lam = parse_lambda_map(j, labels);
    return PeriodicGraph(d, std::vector<std::string>(labels), internal, cross, std::move(lam));
}

std::pair<TransitionSystem, SingleSitePotential> parse_transition_system(const json& j) {
    if (!j.is_object()) throw InvalidInput("transition system description must be a JSON object");
    TransitionSystem ts;
    ts.alphabet = parse_label_array(need(j, "alphabet", "transition system"), "\"alphabet\"");
    const json& dj = need(j, "d", "transition system");
    if (!dj.is_number_integer()) throw InvalidInput("\"d\" must be an integer");
    ts.d = dj.get<int>();
    if (ts.d < 1 || ts.d > kMaxDim)
        throw InvalidInput("\"d\" must be between 1 and " + std::to_string(kMaxDim));

    const json& ms = need(j, "matrices", "transition system");
    if (!ms.is_object()) throw InvalidInput("\"matrices\" must be an object keyed e1..ed");
    const std::size_t k = ts.alphabet.size();
    for (int dim = 1; dim <= ts.d; ++dim) {
        const std::string key = "e" + std::to_string(dim);
        if (!ms.contains(key)) throw InvalidInput("\"matrices\" is missing \"" + key + "\"");
        const json& mj = ms.at(key);
        if (!mj.is_array() || mj.size() != k)
            throw InvalidInput("matrix \"" + key + "\" must be square over the alphabet");
        std::vector<std::vector<std::uint8_t>> m;
        for (const auto& rowj : mj) {
            if (!rowj.is_array() || rowj.size() != k)
                throw InvalidInput("matrix \"" + key + "\" must be square over the alphabet");
            std::vector<std::uint8_t> row;
            for (const auto& x : rowj) {
                if (!x.is_number_integer() || (x.get<int>() != 0 && x.get<int>() != 1))
                    throw InvalidInput("matrix \"" + key + "\" entries must be 0 or 1");
                row.push_back(static_cast<std::uint8_t>(x.get<int>()));
            }
            m.push_back(std::move(row));
        }
        ts.matrices.push_back(std::move(m));
    }
    if (static_cast<std::size_t>(std::distance(ms.begin(), ms.end())) !=
        static_cast<std::size_t>(ts.d))
        throw InvalidInput("\"matrices\" has keys beyond e1..ed");

    SingleSitePotential phi;
    phi.values.assign(k, 0.0);
    if (j.contains("phi")) {
        const json& pj = j.at("phi");
        if (!pj.is_object()) throw InvalidInput("\"phi\" must be an object keyed by symbol");
        for (const auto& [key, val] : pj.items()) {
            const int idx = ts.symbol_index(key);
            if (idx < 0) throw InvalidInput("\"phi\" references unknown symbol: " + key);
            if (!val.is_number()) throw InvalidInput("\"phi\" values must be numbers");
            const double x = val.get<double>();
            if (!std::isfinite(x)) throw InvalidInput("\"phi\" values must be finite");
            phi.values[static_cast<std::size_t>(idx)] = x;
        }
    }
    ts.validate();
    return {std::move(ts), std::move(phi)};
}

std::vector<std::vector<std::uint8_t>> parse_binary_matrix(const json& j) {
    const json& mj = need(j, "matrix", "matrix input");
    if (!mj.is_array() || mj.empty()) throw InvalidInput("\"matrix\" must be a nonempty array");
    const std::size_t k = mj.size();
    std::vector<std::vector<std::uint8_t>> m;
    for (const auto& rowj : mj) {
        if (!rowj.is_array() || rowj.size() != k) throw InvalidInput("\"matrix\" must be square");
        std::vector<std::uint8_t> row;
        for (const auto& x : rowj) {
            if (!x.is_number_integer() || (x.get<int>() != 0 && x.get<int>() != 1))
                throw InvalidInput("\"matrix\" entries must be 0 or 1");
            row.push_back(static_cast<std::uint8_t>(x.get<int>()));
        }
        m.push_back(std::move(row));
    }
    return m;
}

std::vector<double> parse_edge_activities(const json& j, const PeriodicGraph& pg) {
    const std::vector<std::string> labels = edge_orbit_labels(pg);
    std::vector<double> acts(labels.size(), 1.0);
    if (!j.contains("edge_lambda")) return acts;
    const json& m = j.at("edge_lambda");
    if (!m.is_object())
        throw InvalidInput("\"edge_lambda\" must be an object keyed by edge-orbit label");
    for (const auto& [key, val] : m.items()) {
        int idx = -1;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == key) {
                idx = static_cast<int>(i);
                break;
            }
        if (idx < 0) throw InvalidInput("\"edge_lambda\" references unknown edge orbit: " + key);
        acts[static_cast<std::size_t>(idx)] = parse_positive_number(val, "activity of " + key);
    }
    return acts;
}

bool looks_like_periodic_graph(const json& j) { return j.is_object() && j.contains("group"); }

json json_number_or_infinity(double x) {
    if (std::isinf(x)) return x > 0 ? json("infinity") : json("-infinity");
    return json(x);
}

json interval_to_json(const CertifiedInterval& iv, bool with_normalization) {
    json j;
    j["lower"] = json_number_or_infinity(iv.lower);
    j["upper"] = json_number_or_infinity(iv.upper);
    j["estimate"] = json_number_or_infinity(iv.estimate());
    j["epsilon"] = iv.epsilon;
    j["certified"] = iv.certified;
    j["depth_used"] = iv.depth_used;
    if (with_normalization) j["normalization"] = to_string(iv.normalization);
    json fs = json::array();
    for (const FactorBracket& f : iv.factors) {
        json fj;
        fj["i"] = f.index;
        fj["q"] = f.q;
        fj["r"] = f.r;
        fj["depth"] = f.depth;
        fs.push_back(std::move(fj));
    }
    j["factors"] = std::move(fs);
    return j;
}

json regime_to_json(const RegimeReport& rep) {
    json j;
    j["max_degree"] = rep.max_degree;
    j["lambda_plus"] = rep.lambda_plus;
    j["lambda_c_degree"] = json_number_or_infinity(rep.lambda_c_degree);
    if (rep.mu_hat) j["mu_hat"] = *rep.mu_hat;
    if (rep.lambda_c_mu) j["lambda_c_mu"] = json_number_or_infinity(*rep.lambda_c_mu);
    j["regime"] = to_string(rep.regime);
    return j;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

} // namespace hardcore
