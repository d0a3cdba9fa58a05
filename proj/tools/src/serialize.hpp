#pragma once

// JSON in/out for the qmfold command line. Keys serialize in sorted order
// (nlohmann's default object is a map), arbitrary-precision integers travel
// as decimal strings, and rationals carry a double approximation alongside
// the exact numerator/denominator.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qmfold/cf.hpp"
#include "qmfold/deriv.hpp"
#include "qmfold/folding.hpp"
#include "qmfold/kappa.hpp"
#include "qmfold/membership.hpp"
#include "qmfold/minkowski.hpp"
#include "qmfold/pow2bound.hpp"

namespace qmcli {

using nlohmann::json;
using namespace qmfold;

// ---- parsing --------------------------------------------------------------

inline Int parse_int(const std::string& s) {
    try {
        return Int(s);
    } catch (const std::invalid_argument&) {
        throw cf_error("not an integer: '" + s + "'");
    }
}

inline Rat parse_rat(const std::string& s) {
    try {
        Rat x(s);
        if (x.get_den() == 0) throw cf_error("zero denominator: '" + s + "'");
        x.canonicalize();
        return x;
    } catch (const std::invalid_argument&) {
        throw cf_error("not a rational: '" + s + "' (expected p or p/q)");
    }
}

inline CF parse_cf(const std::string& s) {
    CF out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(parse_int(tok));
    return out;
}

inline Int json_int(const json& v) {
    if (v.is_string()) return parse_int(v.get<std::string>());
    if (v.is_number_integer()) return Int(v.get<long>());
    throw cf_error("expected an integer (number or decimal string)");
}

inline BlockSpec parse_spec_json(const json& j) {
    if (!j.is_object() || !j.contains("blocks") || !j.contains("slacks"))
        throw cf_error("spec JSON needs \"blocks\" and \"slacks\"");
    BlockSpec spec;
    for (const json& b : j.at("blocks")) {
        CF block;
        for (const json& e : b) block.push_back(json_int(e));
        spec.blocks.push_back(std::move(block));
    }
    for (const json& s : j.at("slacks")) spec.slacks.push_back(json_int(s));
    validate_spec(spec);
    return spec;
}

// inline JSON, or @path to read a file
inline BlockSpec parse_spec_arg(const std::string& arg) {
    std::string text = arg;
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw cf_error("cannot open spec file: " + arg.substr(1));
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return parse_spec_json(json::parse(text, nullptr, true, true));
    } catch (const json::exception& e) {
        throw cf_error(std::string("bad spec JSON: ") + e.what());
    }
}

// ---- serialization --------------------------------------------------------

inline json jof(const Int& v) { return v.get_str(); }

inline json jof(const Rat& x) {
    return json{{"num", x.get_num().get_str()},
                {"den", x.get_den().get_str()},
                {"approx", x.get_d()}};
}

inline json jof(const CF& a) {
    json out = json::array();
    for (const Int& e : a) out.push_back(e.get_str());
    return out;
}

inline json jof(const Dyadic& d) {
    long e2 = 0;
    double m = mpz_get_d_2exp(&e2, d.num.get_mpz_t());
    double shift = static_cast<double>(e2) - d.exp.get_d();
    return json{{"num", d.num.get_str()},
                {"exp", d.exp.get_str()},
                {"approx", std::ldexp(m, static_cast<int>(std::fmax(std::fmin(shift, 1024.0), -1074.0)))}};
}

inline json jof(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "inconclusive";
    }
}

inline json jof(const KappaInterval& k) { return json{{"lo", jof(k.lo)}, {"hi", jof(k.hi)}}; }

inline json jof(const Pow2Bound& p) {
    double lg = p.coeff == 0 ? -std::numeric_limits<double>::infinity()
                             : std::log2(p.coeff.get_d()) + p.exp.get_d();
    return json{{"coeff", jof(p.coeff)}, {"exp", p.exp.get_str()}, {"approx_log2", lg}};
}

inline json jof(const ConditionCheck& c) {
    return json{{"k", c.k},
                {"sigma", c.sigma.get_str()},
                {"next_block_sum", c.next_block_sum.get_str()},
                {"slack", c.slack.get_str()},
                {"threshold_lo", jof(c.threshold_lo)},
                {"threshold_hi", jof(c.threshold_hi)},
                {"verdict", jof(c.verdict)}};
}

inline json jof(const MembershipCertificate& m) {
    json checks = json::array();
    for (const auto& c : m.checks) checks.push_back(jof(c));
    return json{{"verdict", jof(m.verdict)},
                {"checks", checks},
                {"kappa_lo", jof(m.kappa_lo)},
                {"kappa_hi", jof(m.kappa_hi)}};
}

inline json jof(const ImageConditionCheck& c) {
    return json{{"k", c.k},
                {"empty_next", c.empty_next},
                {"lhs_low", jof(c.lhs_low)},
                {"rhs_up", jof(c.rhs_up)},
                {"verdict", jof(c.verdict)}};
}

inline json jof(const ImageCertificate& m) {
    json checks = json::array();
    for (const auto& c : m.checks) checks.push_back(jof(c));
    return json{{"verdict", jof(m.verdict)}, {"checks", checks}};
}

inline json jof(const MeasuredImageCondition& m) {
    return json{{"k", m.k}, {"g", m.g.get_str()}, {"rhs_hi", jof(m.rhs_hi)}, {"holds", m.holds}};
}

inline json jof(const BlockSpec& spec) {
    json blocks = json::array();
    for (const CF& b : spec.blocks) blocks.push_back(jof(b));
    json slacks = json::array();
    for (const Int& s : spec.slacks) slacks.push_back(s.get_str());
    return json{{"blocks", blocks}, {"slacks", slacks}};
}

inline json jof(const FoldResult& f) {
    return json{{"image", jof(f.image)},
                {"z", f.z.get_str()},
                {"z_index", f.z_index},
                {"swapped_head", f.swapped_head}};
}

inline json jof(const FoldBounds& f) {
    return json{{"shared_prefix", jof(f.shared_prefix)},
                {"z_index", f.z_index},
                {"z_lo", f.z_lo.get_str()},
                {"z_hi", f.z_hi.get_str()}};
}

inline json jof(ZForm f) {
    switch (f) {
        case ZForm::exact_pow2m1: return "exact_pow2m1";
        case ZForm::measured: return "measured";
        default: return "bounded";
    }
}

inline json jof(const ZEntry& z) {
    return json{{"index", z.index},
                {"slack", z.slack.get_str()},
                {"form", jof(z.form)},
                {"value", z.value ? json(z.value->get_str()) : json(nullptr)}};
}

inline json jof(const BlockImageInfo& b) {
    return json{{"begin", b.begin}, {"end", b.end}, {"sum", b.sum.get_str()}};
}

inline json jof(const ImagePrefixResult& r) {
    json blocks = json::array();
    for (const auto& b : r.blocks) blocks.push_back(jof(b));
    json zs = json::array();
    for (const auto& z : r.zs) zs.push_back(jof(z));
    return json{{"raw", jof(r.raw)},
                {"blocks", blocks},
                {"zs", zs},
                {"depth_reached", r.depth_reached},
                {"capped", r.capped}};
}

inline json jof(const OrbitReport& rep) {
    json its = json::array();
    for (const Rat& x : rep.iterates) its.push_back(jof(x));
    return json{{"input", jof(rep.input)},
                {"iterates", its},
                {"classification", rep.classification},
                {"target", jof(rep.target)},
                {"final_distance", jof(rep.final_distance)},
                {"monotone_tail", rep.monotone_tail},
                {"capped", rep.capped}};
}

inline json jof(const Log2Enclosure& e) { return json{{"lo", jof(e.lo)}, {"hi", jof(e.hi)}}; }

inline json jof(const DecayRow& r) {
    json out{{"t", r.t}, {"n", r.n}, {"capped", r.capped}};
    if (!r.capped) {
        out["quotient"] = jof(r.quotient);
        out["log2"] = jof(r.log2q);
    }
    return out;
}

inline json jof(const ChainFactor& f) {
    return json{{"j", f.j}, {"factor", jof(f.factor)}, {"log2", jof(f.log2f)}};
}

inline json jof(const AverageRow& r) {
    return json{{"t", r.t}, {"average", jof(r.average)}, {"exceeds_kappa", jof(r.exceeds_kappa)}};
}

}  // namespace qmcli
