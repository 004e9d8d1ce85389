#pragma once

#include "complexes.hpp"
#include "hodge.hpp"
#include "lefschetz.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>

/// JSON encoding of every exchange type. Conventions:
///  - rationals are strings "num" or "num/den";
///  - scalars are a plain rational string when real, else {"re", "im"};
///  - matrices are {"rows", "cols", "entries": row-major nested arrays};
///  - subspaces are {"ambient", "basis": [row vectors]} (any spanning rows);
///  - filtrations are {"ambient", "jumps": [{"weight", "basis"}]}, increasing;
///    decreasing filtrations store level p at weight -p;
///  - operator families are {"dim", "operators": [matrix, ...]}.
namespace hodgekit::json_io {

using nlohmann::json;

// ---- scalars ---------------------------------------------------------------

inline json to_json(const Scalar& s) {
    if (s.is_rational()) return rat_to_string(s.re);
    return json{{"re", rat_to_string(s.re)}, {"im", rat_to_string(s.im)}};
}

inline Scalar scalar_from(const json& j) {
    if (j.is_number_integer()) return Scalar(long(j.get<long long>()));
    if (j.is_string()) return Scalar(rat_from_string(j.get<std::string>()));
    if (j.is_object()) {
        Rat re = j.contains("re") ? rat_from_string(j.at("re").get<std::string>()) : Rat(0);
        Rat im = j.contains("im") ? rat_from_string(j.at("im").get<std::string>()) : Rat(0);
        return Scalar(re, im);
    }
    throw std::invalid_argument("scalar: expected rational string, integer, or {re,im}");
}

// ---- matrices and subspaces ------------------------------------------------

inline json to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(to_json(m.at(i, k)));
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

inline Matrix matrix_from(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols"))
        throw std::invalid_argument("matrix: expected {rows, cols, entries}");
    int r = j.at("rows").get<int>(), c = j.at("cols").get<int>();
    if (r < 0 || c < 0) throw std::invalid_argument("matrix: negative shape");
    Matrix m(r, c);
    const json& e = j.value("entries", json::array());
    if (int(e.size()) != r && !(r == 0))
        throw std::invalid_argument("matrix: wrong row count");
    for (int i = 0; i < r; ++i) {
        if (int(e.at(i).size()) != c) throw std::invalid_argument("matrix: ragged row");
        for (int k = 0; k < c; ++k) m.at(i, k) = scalar_from(e.at(i).at(k));
    }
    return m;
}

inline json rows_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(to_json(m.at(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix rows_from(const json& j, int ambient) {
    Matrix m(int(j.size()), ambient);
    for (int i = 0; i < m.rows(); ++i) {
        if (int(j.at(i).size()) != ambient)
            throw std::invalid_argument("basis row has wrong length");
        for (int k = 0; k < ambient; ++k) m.at(i, k) = scalar_from(j.at(i).at(k));
    }
    return m;
}

inline json to_json(const Subspace& s) {
    return json{{"ambient", s.ambient_dim()}, {"basis", rows_to_json(s.basis())}};
}

inline Subspace subspace_from(const json& j) {
    if (!j.is_object() || !j.contains("ambient"))
        throw std::invalid_argument("subspace: expected {ambient, basis}");
    int n = j.at("ambient").get<int>();
    return Subspace::span(rows_from(j.value("basis", json::array()), n), n);
}

// ---- filtrations -----------------------------------------------------------

inline json to_json(const Filtration& f) {
    json jumps = json::array();
    for (const auto& [w, s] : f.jumps())
        jumps.push_back(json{{"weight", w}, {"basis", rows_to_json(s.basis())}});
    return json{{"ambient", f.ambient_dim()}, {"jumps", jumps}};
}

inline Filtration filtration_from(const json& j) {
    if (!j.is_object() || !j.contains("ambient"))
        throw std::invalid_argument("filtration: expected {ambient, jumps}");
    int n = j.at("ambient").get<int>();
    if (n == 0) return Filtration();
    std::map<int, Subspace> lv;
    for (const json& e : j.value("jumps", json::array()))
        lv[e.at("weight").get<int>()] =
            Subspace::span(rows_from(e.value("basis", json::array()), n), n);
    return Filtration::from_levels(n, lv);
}

// ---- operator families and pairings ---------------------------------------

inline json to_json(const NilpotentFamily& f) {
    json ops = json::array();
    for (const Matrix& m : f.operators) ops.push_back(to_json(m));
    return json{{"dim", f.dim}, {"operators", ops}};
}

inline NilpotentFamily nilpotent_family_from(const json& j) {
    NilpotentFamily f;
    f.dim = j.at("dim").get<int>();
    for (const json& e : j.value("operators", json::array()))
        f.operators.push_back(matrix_from(e));
    return f;
}

inline json to_json(const MonodromyFamily& f) {
    json ops = json::array();
    for (const Matrix& m : f.operators) ops.push_back(to_json(m));
    return json{{"dim", f.dim}, {"operators", ops}};
}

inline MonodromyFamily monodromy_family_from(const json& j) {
    MonodromyFamily f;
    f.dim = j.at("dim").get<int>();
    for (const json& e : j.value("operators", json::array()))
        f.operators.push_back(matrix_from(e));
    return f;
}

inline json to_json(const Pairing& p) {
    return json{{"parity", p.parity}, {"s", to_json(p.s)}};
}

inline Pairing pairing_from(const json& j) {
    Pairing p;
    p.parity = j.at("parity").get<int>();
    p.s = matrix_from(j.at("s"));
    return p;
}

// ---- filtered Hodge data ---------------------------------------------------

inline json to_json(const HodgeData& h) {
    json out{{"dim", h.dim}, {"w", to_json(h.w)}, {"f", to_json(h.f)}};
    if (h.fbar_user) out["fbar"] = to_json(*h.fbar_user);
    if (!h.nilpotents.operators.empty()) out["nilpotents"] = to_json(h.nilpotents);
    if (!h.polarizations.empty()) {
        json pol = json::array();
        for (const auto& [w, p] : h.polarizations) {
            json e = to_json(p);
            e["weight"] = w;
            pol.push_back(std::move(e));
        }
        out["polarizations"] = pol;
    }
    if (h.weight_offset != 0) out["weight_offset"] = h.weight_offset;
    return out;
}

inline HodgeData hodge_data_from(const json& j) {
    HodgeData h;
    h.dim = j.at("dim").get<int>();
    h.w = filtration_from(j.at("w"));
    h.f = filtration_from(j.at("f"));
    if (j.contains("fbar")) h.fbar_user = filtration_from(j.at("fbar"));
    if (j.contains("nilpotents")) h.nilpotents = nilpotent_family_from(j.at("nilpotents"));
    else h.nilpotents.dim = h.dim;
    for (const json& e : j.value("polarizations", json::array()))
        h.polarizations[e.at("weight").get<int>()] = pairing_from(e);
    h.weight_offset = j.value("weight_offset", 0);
    return h;
}

// ---- complexes -------------------------------------------------------------

inline json to_json(const ChainComplex& c) {
    json terms = json::array(), diffs = json::array();
    for (const auto& [n, d] : c.dims) terms.push_back(json{{"degree", n}, {"dim", d}});
    for (const auto& [n, m] : c.diff)
        diffs.push_back(json{{"degree", n}, {"matrix", to_json(m)}});
    return json{{"terms", terms}, {"differentials", diffs}};
}

inline ChainComplex chain_complex_from(const json& j) {
    ChainComplex c;
    for (const json& e : j.value("terms", json::array()))
        c.dims[e.at("degree").get<int>()] = e.at("dim").get<int>();
    for (const json& e : j.value("differentials", json::array()))
        c.diff[e.at("degree").get<int>()] = matrix_from(e.at("matrix"));
    return c;
}

inline json to_json(const FilteredComplex& fc) {
    json filts = json::object();
    for (const auto& [name, per_deg] : fc.filts) {
        json arr = json::array();
        for (const auto& [n, f] : per_deg)
            arr.push_back(json{{"degree", n}, {"filtration", to_json(f)}});
        filts[name] = std::move(arr);
    }
    return json{{"complex", to_json(fc.cx)}, {"filtrations", filts}};
}

inline FilteredComplex filtered_complex_from(const json& j) {
    FilteredComplex fc;
    fc.cx = chain_complex_from(j.at("complex"));
    if (j.contains("filtrations"))
        for (const auto& [name, arr] : j.at("filtrations").items())
            for (const json& e : arr)
                fc.filts[name][e.at("degree").get<int>()] =
                    filtration_from(e.at("filtration"));
    return fc;
}

// ---- bigraded structures ---------------------------------------------------

inline json ops_to_json(const std::map<BiKey, Matrix>& ops) {
    json arr = json::array();
    for (const auto& [k, m] : ops)
        arr.push_back(json{{"i", k.first}, {"j", k.second}, {"matrix", to_json(m)}});
    return arr;
}

inline std::map<BiKey, Matrix> ops_from(const json& j) {
    std::map<BiKey, Matrix> out;
    for (const json& e : j)
        out[{e.at("i").get<int>(), e.at("j").get<int>()}] = matrix_from(e.at("matrix"));
    return out;
}

inline json to_json(const BigradedHL& x) {
    json pieces = json::array();
    for (const auto& [k, p] : x.pieces) {
        json e{{"i", k.first},
               {"j", k.second},
               {"dim", p.dim},
               {"weight", p.weight},
               {"f", to_json(p.f)}};
        if (p.fbar_user) e["fbar"] = to_json(*p.fbar_user);
        pieces.push_back(std::move(e));
    }
    return json{{"pieces", pieces}, {"l1", ops_to_json(x.l1)},
                {"l2", ops_to_json(x.l2)}, {"d", ops_to_json(x.d)},
                {"s", ops_to_json(x.s)},   {"has_s", x.has_s},
                {"has_d", x.has_d}};
}

inline BigradedHL bigraded_hl_from(const json& j) {
    BigradedHL x;
    for (const json& e : j.value("pieces", json::array())) {
        HLPiece p(e.at("dim").get<int>(), e.at("weight").get<int>(),
                  filtration_from(e.at("f")));
        if (e.contains("fbar")) p.fbar_user = filtration_from(e.at("fbar"));
        x.pieces[{e.at("i").get<int>(), e.at("j").get<int>()}] = std::move(p);
    }
    x.l1 = ops_from(j.value("l1", json::array()));
    x.l2 = ops_from(j.value("l2", json::array()));
    x.d = ops_from(j.value("d", json::array()));
    x.s = ops_from(j.value("s", json::array()));
    x.has_s = j.value("has_s", !x.s.empty());
    x.has_d = j.value("has_d", !x.d.empty());
    return x;
}

// ---- reports ---------------------------------------------------------------

inline json to_json(const Finding& f) {
    return json{{"axiom", f.axiom}, {"location", f.location}, {"detail", f.detail}};
}

inline json to_json(const Report& r) {
    json fails = json::array(), notes = json::array();
    for (const auto& f : r.failures) fails.push_back(to_json(f));
    for (const auto& n : r.notes) notes.push_back(to_json(n));
    return json{{"status", r.pass() ? "pass" : "fail"},
                {"failures", fails},
                {"notes", notes}};
}

inline Finding finding_from(const json& j) {
    return Finding{j.value("axiom", ""), j.value("location", ""), j.value("detail", "")};
}

inline Report report_from(const json& j) {
    Report r;
    for (const json& e : j.value("failures", json::array()))
        r.failures.push_back(finding_from(e));
    for (const json& e : j.value("notes", json::array()))
        r.notes.push_back(finding_from(e));
    return r;
}

} // namespace hodgekit::json_io
