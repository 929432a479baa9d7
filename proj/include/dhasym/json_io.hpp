#pragma once

// JSON forms of the core objects: rationals as "num/den" strings, polynomials
// as variable lists with exponent/coefficient rows, distributions as term
// lists, and model descriptions that rebuild the bundled constructions. Also
// a small schema checker covering the keywords used by the shipped schema
// files, and a plain-text polynomial expression parser for command-line
// pairings.

#include <cctype>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dhasym/models.hpp"
#include "dhasym/multiplicity.hpp"
#include "dhasym/multipoly.hpp"
#include "dhasym/partition.hpp"
#include "dhasym/polytope.hpp"
#include "dhasym/rational.hpp"
#include "dhasym/theta.hpp"

namespace dhasym {

using nlohmann::json;

// Canonical text form: bare integers stay bare, everything else is num/den.
inline std::string rational_str(const Rational& r) {
    if (r.is_integer()) return r.floor().get_str();
    return r.str();
}

inline json rational_to_json(const Rational& r) { return rational_str(r); }

inline Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (!j.is_string())
        throw std::invalid_argument("rational: expected \"num/den\" string or integer");
    static const std::regex form(R"(^-?[0-9]+(/-?[0-9]+)?$)");
    std::string s = j.get<std::string>();
    if (!std::regex_match(s, form))
        throw std::invalid_argument("rational: malformed value \"" + s + "\"");
    mpq_class q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw std::invalid_argument("rational: malformed value \"" + s + "\"");
    q.canonicalize();
    return Rational(q);
}

inline json ivec_to_json(const IVec& v) {
    json a = json::array();
    for (long long x : v) a.push_back(x);
    return a;
}

inline IVec ivec_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("integer vector: expected array");
    IVec v;
    for (const auto& x : j) {
        if (!x.is_number_integer())
            throw std::invalid_argument("integer vector: entries must be integers");
        v.push_back(x.get<long long>());
    }
    return v;
}

inline json vec_to_json(const Vec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(rational_to_json(x));
    return a;
}

inline Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("vector: expected array");
    Vec v;
    for (const auto& x : j) v.push_back(rational_from_json(x));
    return v;
}

inline json multipoly_to_json(const MultiPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json row = json::array();
        json exps = json::array();
        for (int x : e) exps.push_back(x);
        row.push_back(exps);
        row.push_back(rational_to_json(c));
        terms.push_back(row);
    }
    json out;
    out["vars"] = p.vars();
    out["terms"] = terms;
    return out;
}

inline MultiPoly multipoly_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vars") || !j.contains("terms"))
        throw std::invalid_argument("polynomial: expected {vars, terms}");
    std::vector<std::string> vars = j["vars"].get<std::vector<std::string>>();
    MultiPoly p;
    for (const auto& row : j["terms"]) {
        if (!row.is_array() || row.size() != 2)
            throw std::invalid_argument("polynomial: term rows are [exponents, coefficient]");
        std::vector<int> e = row[0].get<std::vector<int>>();
        if (e.size() != vars.size())
            throw std::invalid_argument("polynomial: exponent row length mismatch");
        MultiPoly mono = MultiPoly::constant(rational_from_json(row[1]));
        for (size_t i = 0; i < vars.size(); ++i)
            for (int k = 0; k < e[i]; ++k) mono = mono * MultiPoly::variable(vars[i]);
        p = p + mono;
    }
    return p;
}

inline json distribution_to_json(const FaceDistribution& D) {
    json terms = json::array();
    for (const auto& t : D.terms()) {
        json jt;
        jt["base"] = vec_to_json(t.base);
        json blocks = json::array();
        for (const auto& block : t.blocks) {
            json jb = json::array();
            for (const auto& rl : block) {
                json jr;
                jr["dir"] = ivec_to_json(rl.dir);
                jr["len"] = rl.len ? rational_to_json(*rl.len) : json(nullptr);
                jb.push_back(jr);
            }
            blocks.push_back(jb);
        }
        jt["blocks"] = blocks;
        jt["density"] = multipoly_to_json(t.density);
        json ops = json::array();
        for (const auto& op : t.ops) {
            json jo;
            jo["dir"] = ivec_to_json(op.dir);
            jo["order"] = op.order;
            ops.push_back(jo);
        }
        jt["ops"] = ops;
        terms.push_back(jt);
    }
    json out;
    out["dim"] = D.dim();
    out["terms"] = terms;
    return out;
}

inline FaceDistribution distribution_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("terms"))
        throw std::invalid_argument("distribution: expected {dim, terms}");
    FaceDistribution D(j["dim"].get<size_t>());
    for (const auto& jt : j["terms"]) {
        DistTerm t;
        t.base = vec_from_json(jt.at("base"));
        for (const auto& jb : jt.at("blocks")) {
            std::vector<Rail> block;
            for (const auto& jr : jb) {
                Rail rl;
                rl.dir = ivec_from_json(jr.at("dir"));
                if (!jr.at("len").is_null()) rl.len = rational_from_json(jr.at("len"));
                block.push_back(std::move(rl));
            }
            t.blocks.push_back(std::move(block));
        }
        t.density = multipoly_from_json(jt.at("density"));
        for (const auto& jo : jt.at("ops")) {
            DerivOp op;
            op.dir = ivec_from_json(jo.at("dir"));
            op.order = jo.at("order").get<int>();
            t.ops.push_back(std::move(op));
        }
        D.add_term(std::move(t));
    }
    return D;
}

// ---------------------------------------------------------------------------
// Polynomial expressions: + - * ^ ( ), integer or num/den literals, variables
// x1, x2, ... Example: "3/2*x1^2*x2 - x2 + 1".

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string s) : s_(std::move(s)) {}

    MultiPoly parse() {
        MultiPoly p = expr();
        skip();
        if (pos_ != s_.size())
            throw std::invalid_argument("polynomial expression: trailing input at '" +
                                        s_.substr(pos_) + "'");
        return p;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    MultiPoly expr() {
        MultiPoly p = eat('-') ? -term() : term();
        while (true) {
            if (eat('+'))
                p = p + term();
            else if (eat('-'))
                p = p - term();
            else
                return p;
        }
    }

    MultiPoly term() {
        MultiPoly p = factor();
        while (eat('*')) p = p * factor();
        return p;
    }

    MultiPoly factor() {
        MultiPoly base = atom();
        if (eat('^')) {
            long e = integer();
            if (e < 0) throw std::invalid_argument("polynomial expression: negative exponent");
            return base.pow(static_cast<int>(e));
        }
        return base;
    }

    MultiPoly atom() {
        char c = peek();
        if (c == '(') {
            eat('(');
            MultiPoly p = expr();
            if (!eat(')')) throw std::invalid_argument("polynomial expression: missing ')'");
            return p;
        }
        if (c == '-') {
            eat('-');
            return -atom();
        }
        if (c == 'x') {
            ++pos_;
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ == start)
                throw std::invalid_argument("polynomial expression: variables look like x1, x2");
            return MultiPoly::variable("x" + s_.substr(start, pos_ - start));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long num = integer();
            if (eat('/')) {
                long den = integer();
                return MultiPoly::constant(Rational(num, den));
            }
            return MultiPoly::constant(Rational(num));
        }
        throw std::invalid_argument(std::string("polynomial expression: unexpected '") + c + "'");
    }

    long integer() {
        skip();
        size_t start = pos_;
        if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start || (s_[start] == '-' && pos_ == start + 1))
            throw std::invalid_argument("polynomial expression: expected a number");
        return std::stol(s_.substr(start, pos_ - start));
    }

    std::string s_;
    size_t pos_ = 0;
};

}  // namespace detail

inline MultiPoly poly_from_expression(const std::string& s) {
    return detail::ExprParser(s).parse();
}

// ---------------------------------------------------------------------------
// Schema checking: the subset of keywords used by the shipped schema files.
// Supported: type (string or array), enum, const, pattern, minimum, items,
// minItems, properties, required, additionalProperties (boolean).

namespace detail {

inline bool schema_type_matches(const std::string& t, const json& v) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    throw std::invalid_argument("schema: unknown type " + t);
}

inline void schema_check(const json& schema, const json& v, const std::string& path,
                         std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string())
            ok = schema_type_matches(t.get<std::string>(), v);
        else
            for (const auto& opt : t) ok = ok || schema_type_matches(opt.get<std::string>(), v);
        if (!ok) {
            errors.push_back(path + ": wrong type");
            return;
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& opt : schema["enum"]) ok = ok || opt == v;
        if (!ok) errors.push_back(path + ": not one of the allowed values");
    }
    if (schema.contains("const") && schema["const"] != v)
        errors.push_back(path + ": does not match the fixed value");
    if (schema.contains("pattern") && v.is_string()) {
        std::regex re(schema["pattern"].get<std::string>());
        if (!std::regex_search(v.get<std::string>(), re))
            errors.push_back(path + ": does not match pattern");
    }
    if (schema.contains("minimum") && v.is_number() &&
        v.get<double>() < schema["minimum"].get<double>())
        errors.push_back(path + ": below minimum");
    if (v.is_array()) {
        if (schema.contains("minItems") && v.size() < schema["minItems"].get<size_t>())
            errors.push_back(path + ": too few items");
        if (schema.contains("items"))
            for (size_t i = 0; i < v.size(); ++i)
                schema_check(schema["items"], v[i], path + "[" + std::to_string(i) + "]", errors);
    }
    if (v.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!v.contains(key.get<std::string>()))
                    errors.push_back(path + ": missing required field " + key.get<std::string>());
        const json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (props && props->contains(it.key()))
                schema_check((*props)[it.key()], it.value(), path + "." + it.key(), errors);
            else if (schema.contains("additionalProperties") &&
                     schema["additionalProperties"].is_boolean() &&
                     !schema["additionalProperties"].get<bool>())
                errors.push_back(path + ": unexpected field " + it.key());
        }
    }
}

}  // namespace detail

inline std::vector<std::string> schema_errors(const json& schema, const json& instance) {
    std::vector<std::string> errors;
    detail::schema_check(schema, instance, "$", errors);
    return errors;
}

inline void schema_require(const json& schema, const json& instance) {
    auto errors = schema_errors(schema, instance);
    if (!errors.empty()) {
        std::ostringstream os;
        os << "schema violation:";
        for (const auto& e : errors) os << "\n  " << e;
        throw std::invalid_argument(os.str());
    }
}

// ---------------------------------------------------------------------------
// Model descriptions.

struct ParsedModel {
    std::string type;
    std::optional<ThetaModel> theta;
    std::optional<VectorList> weights;
    std::optional<LatticePolytope> polytope;
    // the description with defaults filled in; parsing it again is a fixpoint
    json normalized;
};

// The document shape accepted by parse_model; also shipped as
// schemas/model.schema.json.
inline const json& model_schema() {
    static const json schema = json::parse(R"({
  "type": "object",
  "required": ["type"],
  "additionalProperties": false,
  "properties": {
    "type": {
      "type": "string",
      "enum": ["polytope", "convolution", "p1p1", "halfline", "cone", "partition"]
    },
    "name": {"type": "string"},
    "d": {"type": "integer", "minimum": 0},
    "rank": {"type": "integer", "minimum": 1},
    "halfspaces": {
      "type": "array",
      "minItems": 1,
      "items": {
        "type": "object",
        "required": ["normal", "offset"],
        "additionalProperties": false,
        "properties": {
          "normal": {"type": "array", "minItems": 1, "items": {"type": "integer"}},
          "offset": {"type": ["string", "integer"], "pattern": "^-?[0-9]+(/-?[0-9]+)?$"}
        }
      }
    },
    "intervals": {
      "type": "array",
      "minItems": 1,
      "items": {
        "type": "array",
        "minItems": 2,
        "items": {"type": ["string", "integer"], "pattern": "^-?[0-9]+(/-?[0-9]+)?$"}
      }
    },
    "weights": {
      "type": "array",
      "minItems": 1,
      "items": {"type": "array", "minItems": 1, "items": {"type": "integer"}}
    }
  }
})");
    return schema;
}

inline LatticePolytope polytope_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("polytope: expected a nonempty halfspace array");
    std::vector<Halfspace> hs;
    size_t dim = 0;
    for (const auto& row : j) {
        Halfspace h;
        h.normal = ivec_from_json(row.at("normal"));
        h.offset = rational_from_json(row.at("offset"));
        if (dim == 0) dim = h.normal.size();
        if (h.normal.size() != dim)
            throw std::invalid_argument("polytope: inconsistent normal dimensions");
        hs.push_back(std::move(h));
    }
    return LatticePolytope(dim, hs);
}

inline json polytope_to_json(const LatticePolytope& P) {
    json rows = json::array();
    for (const auto& h : P.halfspaces()) {
        json row;
        row["normal"] = ivec_to_json(h.normal);
        row["offset"] = rational_to_json(h.offset);
        rows.push_back(row);
    }
    return rows;
}

namespace detail {

// Graded family of an iterated interval convolution, lowest order first.
inline std::vector<FaceDistribution> convolution_family(
    const std::vector<std::pair<Rational, Rational>>& intervals, int nmax) {
    std::vector<FaceDistribution> cur = interval_family(intervals[0].first, intervals[0].second,
                                                        nmax);
    for (size_t i = 1; i < intervals.size(); ++i) {
        auto next = interval_family(intervals[i].first, intervals[i].second, nmax);
        std::vector<FaceDistribution> acc;
        for (int n = 0; n <= nmax; ++n) acc.push_back(dh_convolve_graded(cur, next, n));
        cur = std::move(acc);
    }
    return cur;
}

}  // namespace detail

inline ThetaModel model_polytope_from_json(const json& j) {
    LatticePolytope P = polytope_from_json(j.at("halfspaces"));
    ThetaModel m;
    m.name = j.contains("name") ? j["name"].get<std::string>()
                                : "polytope (" + std::to_string(P.dim()) + "d)";
    m.mult = toric_multiplicity(P, m.name + " counts");
    m.d = j.contains("d") ? j["d"].get<int>() : static_cast<int>(P.dim());
    m.dh = [P](int n) { return dh_delzant(P, n); };
    Vec lo(P.dim()), hi(P.dim());
    auto verts = P.vertices();
    for (size_t i = 0; i < P.dim(); ++i) {
        lo[i] = verts[0][i];
        hi[i] = verts[0][i];
        for (const auto& v : verts) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
        lo[i] -= Rational(1);
        hi[i] += Rational(1);
    }
    m.pair_box = {{lo, hi}};
    return m;
}

inline ThetaModel model_convolution_from_json(const json& j) {
    std::vector<std::pair<Rational, Rational>> intervals;
    for (const auto& row : j.at("intervals")) {
        if (!row.is_array() || row.size() != 2)
            throw std::invalid_argument("convolution model: intervals are [a, b] pairs");
        Rational a = rational_from_json(row[0]);
        Rational b = rational_from_json(row[1]);
        if (!(a < b) || !a.is_integer() || !b.is_integer())
            throw std::invalid_argument("convolution model: needs lattice intervals with a < b");
        intervals.push_back({a, b});
    }
    if (intervals.empty())
        throw std::invalid_argument("convolution model: needs at least one interval");

    ThetaModel m;
    m.name = j.contains("name") ? j["name"].get<std::string>() : "interval convolution";
    MultiplicityFunction mult =
        toric_multiplicity(interval_polytope(intervals[0].first.floor().get_si(),
                                             intervals[0].second.floor().get_si()),
                           "interval counts");
    for (size_t i = 1; i < intervals.size(); ++i)
        mult = convolve_multiplicity(
            mult, toric_multiplicity(interval_polytope(intervals[i].first.floor().get_si(),
                                                       intervals[i].second.floor().get_si()),
                                     "interval counts"));
    mult.name = m.name + " counts";
    m.mult = std::move(mult);
    m.d = j.contains("d") ? j["d"].get<int>() : static_cast<int>(intervals.size());
    m.dh = [intervals](int n) { return detail::convolution_family(intervals, n)[static_cast<size_t>(n)]; };
    return m;
}

inline ParsedModel parse_model(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("model: expected an object with a type field");
    schema_require(model_schema(), j);
    ParsedModel out;
    out.type = j["type"].get<std::string>();
    out.normalized["type"] = out.type;
    if (j.contains("name")) out.normalized["name"] = j["name"];
    if (out.type == "polytope") {
        out.theta = model_polytope_from_json(j);
        out.polytope = polytope_from_json(j.at("halfspaces"));
        out.normalized["halfspaces"] = polytope_to_json(*out.polytope);
        out.normalized["d"] = out.theta->d;
    } else if (out.type == "convolution") {
        out.theta = model_convolution_from_json(j);
        json rows = json::array();
        for (const auto& row : j.at("intervals")) {
            json pair = json::array();
            pair.push_back(rational_to_json(rational_from_json(row[0])));
            pair.push_back(rational_to_json(rational_from_json(row[1])));
            rows.push_back(pair);
        }
        out.normalized["intervals"] = rows;
        out.normalized["d"] = out.theta->d;
    } else if (out.type == "p1p1") {
        out.theta = model_p1p1();
        out.normalized["d"] = 2;
    } else if (out.type == "halfline") {
        out.theta = model_halfline();
        out.normalized["d"] = 1;
    } else if (out.type == "cone") {
        int rank = j.contains("rank") ? j["rank"].get<int>() : 1;
        if (rank == 1)
            out.theta = model_halfline();
        else if (rank == 2)
            out.theta = model_quadrant();
        else
            throw std::invalid_argument("cone model: rank must be 1 or 2");
        out.normalized["rank"] = rank;
        out.normalized["d"] = rank;
    } else if (out.type == "partition") {
        size_t rank = j.at("rank").get<size_t>();
        std::vector<IVec> weights;
        for (const auto& w : j.at("weights")) weights.push_back(ivec_from_json(w));
        out.weights = VectorList(rank, weights);
        out.normalized["rank"] = rank;
        json ws = json::array();
        for (const auto& w : weights) ws.push_back(ivec_to_json(w));
        out.normalized["weights"] = ws;
    } else {
        throw std::invalid_argument("model: unknown type " + out.type);
    }
    return out;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("parse error in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace dhasym
