#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orbicat/io.hpp"

namespace orbicat {

using nlohmann::json;

namespace {

double snap(double v) {
    if (std::abs(v) < 1e-13) return 0.0;
    return v;
}

[[noreturn]] void malformed(const std::string& kind, const std::string& where, const std::string& what) {
    throw Error(kind, where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& kind) {
    if (!j.is_object() || !j.contains(key)) malformed(kind, key, "missing field");
    return j.at(key);
}

int as_index(const json& v, int n, const std::string& kind, const std::string& where) {
    if (!v.is_number_integer()) malformed(kind, where, "expected an integer");
    int k = v.get<int>();
    if (k < 0 || k >= n) malformed(kind, where, "index " + std::to_string(k) + " out of range");
    return k;
}

// label given by name or by index
int as_label(const json& v, const SkeletalCategory& cat, const std::string& kind, const std::string& where) {
    if (v.is_string()) {
        int k = cat.label_index(v.get<std::string>());
        if (k < 0) malformed(kind, where, "unknown label " + v.get<std::string>());
        return k;
    }
    return as_index(v, cat.n(), kind, where);
}

}  // namespace

ojson to_json(cplx z) { return ojson::array({snap(z.real()), snap(z.imag())}); }

ojson to_json(const Mat& m) {
    ojson out = ojson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ojson row = ojson::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

cplx cplx_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        malformed("MalformedData", where, "expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Mat mat_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) malformed("MalformedData", where, "expected a matrix");
    const auto rows = (Eigen::Index)j.size();
    Eigen::Index cols = rows ? (Eigen::Index)j[0].size() : 0;
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!j[r].is_array() || (Eigen::Index)j[r].size() != cols) malformed("MalformedData", where, "ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = cplx_from_json(j[r][c], where);
    }
    return m;
}

ojson to_json(const ConditionReport& r) {
    ojson j = ojson::object();
    for (const auto& c : r.items) j[c.name] = {{"pass", c.pass}, {"residual", c.residual}};
    return j;
}

namespace {

bool flat(const ojson& j) {
    if (!j.is_array()) return false;
    for (auto& e : j)
        if (e.is_structured() && !(e.is_array() && e.size() <= 2 && !e.empty() && e[0].is_primitive() && e.back().is_primitive()))
            return false;
    return true;
}

void pretty_rec(const ojson& j, std::string& out, int depth) {
    std::string pad((size_t)depth * 2, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto& [k, v] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + "  " + ojson(k).dump() + ": ";
            pretty_rec(v, out, depth + 1);
        }
        out += "\n" + pad + "}";
    } else if (j.is_array() && !flat(j)) {
        out += "[\n";
        for (size_t k = 0; k < j.size(); ++k) {
            if (k) out += ",\n";
            out += pad + "  ";
            pretty_rec(j[k], out, depth + 1);
        }
        out += "\n" + pad + "]";
    } else {
        std::string s = j.dump();
        if (j.is_array()) {
            // a space after each separating comma
            std::string t;
            for (char c : s) {
                t += c;
                if (c == ',') t += ' ';
            }
            s = t;
        }
        out += s;
    }
}

}  // namespace

std::string pretty(const ojson& j) {
    std::string out;
    pretty_rec(j, out, 0);
    return out + "\n";
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IOError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        size_t pos = std::min<size_t>(e.byte ? e.byte - 1 : 0, text.size());
        int line = 1, col = 1;
        for (size_t k = 0; k < pos; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error("ParseError", path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IOError", "cannot write " + path);
    out << text;
    if (!out) throw Error("IOError", "write failed for " + path);
}

SkeletalCategory category_from_json(const json& j) {
    const std::string K = "MalformedData";
    SkeletalCategory c;
    const json& labels = field(j, "labels", K);
    if (!labels.is_array() || labels.empty()) malformed(K, "labels", "expected a non-empty array");
    for (auto& l : labels) {
        if (!l.is_string()) malformed(K, "labels", "expected strings");
        c.labels.push_back(l.get<std::string>());
    }
    const int n = c.n();
    c.Nt.assign((size_t)n * n * n, 0);
    for (auto& e : field(j, "N", K)) {
        if (!e.is_array() || e.size() != 4) malformed(K, "N", "entries are [i,j,k,mult]");
        int i = as_index(e[0], n, K, "N"), a = as_index(e[1], n, K, "N"), k = as_index(e[2], n, K, "N");
        if (!e[3].is_number_integer() || e[3].get<int>() < 0) malformed(K, "N", "multiplicity must be a nonnegative integer");
        c.Nt[((size_t)i * n + a) * n + k] = e[3].get<int>();
    }
    if (j.contains("dual")) {
        for (auto& d : j.at("dual")) c.dual.push_back(as_index(d, n, K, "dual"));
        if ((int)c.dual.size() != n) malformed(K, "dual", "arity differs from labels");
    } else {
        c.dual.assign(n, 0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                if (c.N(i, k, 0)) c.dual[i] = k;
    }
    const json& q = field(j, "qdim", K);
    if (!q.is_array() || (int)q.size() != n) malformed(K, "qdim", "arity differs from labels");
    for (auto& v : q) c.qdim.push_back(cplx_from_json(v, "qdim"));
    for (auto& e : field(j, "F", K)) {
        const json& idx = field(e, "idx", K);
        if (!idx.is_array() || idx.size() != 6) malformed(K, "F.idx", "expected six labels");
        FKey key{};
        for (int t = 0; t < 6; ++t) key[t] = as_index(idx[t], n, K, "F.idx");
        if (e.contains("mu")) {
            if (!e["mu"].is_array() || e["mu"].size() != 4) malformed(K, "F.mu", "expected four indices");
            for (int t = 0; t < 4; ++t) key[6 + t] = e["mu"][t].get<int>();
        }
        c.F[key] = cplx_from_json(field(e, "val", K), "F.val");
    }
    if (j.contains("R") && !j.at("R").empty()) {
        c.has_R = true;
        for (auto& e : j.at("R")) {
            const json& idx = field(e, "idx", K);
            if (!idx.is_array() || idx.size() != 3) malformed(K, "R.idx", "expected three labels");
            RKey key{};
            for (int t = 0; t < 3; ++t) key[t] = as_index(idx[t], n, K, "R.idx");
            if (e.contains("mu")) {
                if (!e["mu"].is_array() || e["mu"].size() != 2) malformed(K, "R.mu", "expected two indices");
                for (int t = 0; t < 2; ++t) key[3 + t] = e["mu"][t].get<int>();
            }
            c.R[key] = cplx_from_json(field(e, "val", K), "R.val");
        }
    }
    if (j.contains("twist") && !j.at("twist").empty()) {
        if ((int)j.at("twist").size() != n) malformed(K, "twist", "arity differs from labels");
        for (auto& v : j.at("twist")) c.twist.push_back(cplx_from_json(v, "twist"));
    }
    return c;
}

ojson category_to_json(const SkeletalCategory& c) {
    const int n = c.n();
    ojson j;
    j["labels"] = c.labels;
    j["dual"] = c.dual;
    ojson q = ojson::array();
    for (auto d : c.qdim) q.push_back(to_json(d));
    j["qdim"] = q;
    ojson N = ojson::array();
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a)
            for (int k = 0; k < n; ++k)
                if (c.N(i, a, k)) N.push_back({i, a, k, c.N(i, a, k)});
    j["N"] = N;
    ojson F = ojson::array();
    for (auto& [k, v] : c.F)
        F.push_back({{"idx", {k[0], k[1], k[2], k[3], k[4], k[5]}}, {"mu", {k[6], k[7], k[8], k[9]}}, {"val", to_json(v)}});
    j["F"] = F;
    ojson R = ojson::array();
    if (c.has_R)
        for (auto& [k, v] : c.R) R.push_back({{"idx", {k[0], k[1], k[2]}}, {"mu", {k[3], k[4]}}, {"val", to_json(v)}});
    j["R"] = R;
    ojson t = ojson::array();
    for (auto v : c.twist) t.push_back(to_json(v));
    j["twist"] = t;
    return j;
}

SkeletalCategory load_category(const std::string& arg) {
    const std::string pre = "builtin:";
    if (arg.rfind(pre, 0) == 0) return builtin(arg.substr(pre.size()));
    return category_from_json(read_json_file(arg));
}

OrbifoldDatum datum_from_json(const json& j) {
    const std::string K = "MalformedDatum";
    OrbifoldDatum d;
    const json& labels = field(j, "labels", K);
    if (!labels.is_array() || labels.empty()) malformed(K, "labels", "expected a non-empty array");
    for (auto& l : labels) {
        if (!l.is_string()) malformed(K, "labels", "expected strings");
        d.labels.push_back(l.get<std::string>());
    }
    const int n = d.n();
    d.T.n = n;
    for (auto& e : field(j, "T", K)) {
        if (!e.is_array() || e.size() != 4) malformed(K, "T", "entries are [l,i,j,dim]");
        int l = as_index(e[0], n, K, "T"), i = as_index(e[1], n, K, "T"), a = as_index(e[2], n, K, "T");
        if (!e[3].is_number_integer() || e[3].get<int>() < 0) malformed(K, "T", "dim must be a nonnegative integer");
        d.T.set(l, i, a, e[3].get<int>());
    }
    auto blocks = [&](const char* key, std::map<Key4, AlphaBlock>& out) {
        for (auto& e : field(j, key, K)) {
            const json& k = field(e, "key", K);
            if (!k.is_array() || k.size() != 4) malformed(K, key, "key is [l,i,j,k]");
            Key4 kk{};
            for (int t = 0; t < 4; ++t) kk[t] = as_index(k[t], n, K, key);
            AlphaBlock b;
            for (auto& r : field(e, "rows", K)) b.rows.push_back(as_index(r, n, K, key));
            for (auto& c : field(e, "cols", K)) b.cols.push_back(as_index(c, n, K, key));
            try {
                b.val = mat_from_json(field(e, "val", K), key);
            } catch (const Error& err) {
                throw Error(K, err.what());
            }
            if (b.val.rows() == 0 && !b.rows.empty()) b.val = Mat::Zero((Eigen::Index)b.rows.size(), (Eigen::Index)b.cols.size());
            out[kk] = std::move(b);
        }
    };
    blocks("alpha", d.alpha);
    blocks("alpha_bar", d.alpha_bar);
    for (auto& p : field(j, "psi", K)) d.psi.push_back(cplx_from_json(p, "psi"));
    d.phi = cplx_from_json(field(j, "phi", K), "phi");
    validate_datum(d);
    return d;
}

ojson datum_to_json(const OrbifoldDatum& d) {
    ojson j;
    j["labels"] = d.labels;
    ojson T = ojson::array();
    for (auto& [g, dim] : d.T.dims) T.push_back({g[0], g[1], g[2], dim});
    j["T"] = T;
    auto blocks = [](const std::map<Key4, AlphaBlock>& m) {
        ojson out = ojson::array();
        for (auto& [k, b] : m)
            out.push_back({{"key", {k[0], k[1], k[2], k[3]}}, {"rows", b.rows}, {"cols", b.cols}, {"val", to_json(b.val)}});
        return out;
    };
    j["alpha"] = blocks(d.alpha);
    j["alpha_bar"] = blocks(d.alpha_bar);
    ojson psi = ojson::array();
    for (auto p : d.psi) psi.push_back(to_json(p));
    j["psi"] = psi;
    j["phi"] = to_json(d.phi);
    return j;
}

AlgebraInMFC algebra_from_json(const json& j, const SkeletalCategory& cat) {
    const std::string K = "MalformedAlgebra";
    AlgebraInMFC a;
    for (auto& s : field(j, "support", K)) a.support.push_back(as_label(s, cat, K, "support"));
    for (auto& e : field(j, "mult", K)) {
        const json& idx = field(e, "idx", K);
        if (!idx.is_array() || idx.size() != 3) malformed(K, "mult.idx", "expected three labels");
        std::array<int, 3> k{};
        for (int t = 0; t < 3; ++t) k[t] = as_label(idx[t], cat, K, "mult.idx");
        try {
            a.mult[k] = cplx_from_json(field(e, "val", K), "mult.val");
        } catch (const Error& err) {
            throw Error(K, err.what());
        }
    }
    return a;
}

ojson algebra_to_json(const AlgebraInMFC& a) {
    ojson j;
    j["support"] = a.support;
    ojson m = ojson::array();
    for (auto& [k, v] : a.mult) m.push_back({{"idx", {k[0], k[1], k[2]}}, {"val", to_json(v)}});
    j["mult"] = m;
    return j;
}

ojson modular_data_to_json(const ModularData& md) {
    ojson j;
    j["labels"] = md.labels;
    ojson q = ojson::array(), t = ojson::array();
    for (auto v : md.qdim) q.push_back(to_json(v));
    for (auto v : md.tdiag) t.push_back(to_json(v));
    j["qdim"] = q;
    j["smatrix"] = to_json(md.smatrix);
    j["tdiag"] = t;
    j["global_dim"] = to_json(md.global_dim);
    return j;
}

ModularData modular_data_from_json(const json& j) {
    const std::string K = "MalformedData";
    ModularData md;
    const char* qkey = j.contains("qdim") ? "qdim" : "qdims";
    for (auto& v : field(j, qkey, K)) md.qdim.push_back(cplx_from_json(v, qkey));
    const int m = (int)md.qdim.size();
    md.smatrix = mat_from_json(field(j, "smatrix", K), "smatrix");
    if (md.smatrix.rows() != m || md.smatrix.cols() != m) malformed(K, "smatrix", "shape differs from qdim");
    for (auto& v : field(j, "tdiag", K)) md.tdiag.push_back(cplx_from_json(v, "tdiag"));
    if ((int)md.tdiag.size() != m) malformed(K, "tdiag", "arity differs from qdim");
    if (j.contains("labels"))
        for (auto& l : j.at("labels")) md.labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    else
        for (int k = 0; k < m; ++k) md.labels.push_back(std::to_string(k));
    if (j.contains("global_dim")) {
        md.global_dim = cplx_from_json(j.at("global_dim"), "global_dim");
    } else {
        md.global_dim = 0.0;
        for (auto d : md.qdim) md.global_dim += d * d;
    }
    return md;
}

}  // namespace orbicat
