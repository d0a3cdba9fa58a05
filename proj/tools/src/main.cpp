#include <algorithm>
#include <iostream>
#include <numeric>
#include <thread>

#include <CLI11.hpp>

#include "serialize.hpp"

using namespace qmcli;

namespace {

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// 0 pass | 1 certified failure | 3 inconclusive (interval too wide or capped)
int verdict_exit(Verdict membership, Verdict image) {
    if (membership == Verdict::fail) return 1;
    if (membership == Verdict::inconclusive || image == Verdict::inconclusive) return 3;
    return 0;
}

Rat checked_unit_rat(const std::string& s) {
    Rat x = parse_rat(s);
    if (x < 0 || x > 1) throw cf_error("value must lie in [0, 1]: " + s);
    return x;
}

json counts_json(const std::vector<OrbitReport>& reps) {
    std::map<std::string, std::size_t> counts;
    std::size_t capped = 0;
    json unclassified = json::array();
    for (const auto& r : reps) {
        ++counts[r.classification];
        if (r.capped) ++capped;
        if (r.classification == "unclassified")
            unclassified.push_back(r.input.get_str());
    }
    json c;
    for (const auto& [k, v] : counts) c[k] = v;
    return json{{"total", reps.size()},
                {"counts", c},
                {"capped", capped},
                {"unclassified", unclassified}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact question-mark arithmetic, folded images, and slow-decay certificates"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "read option defaults from an INI file");

    std::string kappa_width = "1/100000";
    app.add_option("--kappa-width", kappa_width,
                   "width (a positive rational p/q) of the decay-constant enclosure")
        ->capture_default_str();
    auto kappa = [&] { return kappa2_enclosure(parse_rat(kappa_width)); };

    int rc = 0;

    // ---- qm ----------------------------------------------------------------
    auto* qm = app.add_subcommand("qm", "the question-mark map on exact rationals");
    qm->require_subcommand(1);

    std::string qe_x, qe_cf;
    unsigned long qe_bits = 1ul << 26;
    auto* qm_eval = qm->add_subcommand("eval", "dyadic image of a rational in [0,1]");
    qm_eval->add_option("--x", qe_x, "rational p/q");
    qm_eval->add_option("--cf", qe_cf, "partial quotients a1,a2,...");
    qm_eval->add_option("--max-bits", qe_bits, "materialization budget in bits");
    qm_eval->callback([&] {
        if (qe_x.empty() == qe_cf.empty())
            throw cf_error("qm eval: give exactly one of --x, --cf");
        CF a = qe_x.empty() ? parse_cf(qe_cf) : cf_from_rational(checked_unit_rat(qe_x));
        Dyadic d = qm_of_cf(a, qe_bits);
        emit(json{{"x", jof(cf_to_rational(a))}, {"cf", jof(a)}, {"image", jof(d)}});
    });

    std::string qi_num, qi_exp, qi_d;
    auto* qm_inv = qm->add_subcommand("invert", "preimage of a dyadic rational");
    auto* qi_num_opt = qm_inv->add_option("--num", qi_num, "dyadic numerator");
    auto* qi_exp_opt = qm_inv->add_option("--exp", qi_exp, "dyadic exponent: value num/2^exp");
    qm_inv->add_option("--d", qi_d, "the dyadic as a plain rational p/q");
    qi_num_opt->needs(qi_exp_opt);
    qi_exp_opt->needs(qi_num_opt);
    qm_inv->callback([&] {
        if (qi_d.empty() == qi_num.empty())
            throw cf_error("qm invert: give either --d or --num with --exp");
        Dyadic d = qi_d.empty() ? dyadic_make(parse_int(qi_num), parse_int(qi_exp))
                                : dyadic_from_rational(checked_unit_rat(qi_d));
        CF pre = qm_inverse(d);
        emit(json{{"dyadic", jof(d)},
                  {"preimage", jof(cf_to_rational(pre))},
                  {"preimage_cf", jof(pre)}});
    });

    std::string qt_x;
    unsigned qt_n = 1;
    unsigned long qt_cap = 1ul << 16;
    auto* qm_iter = qm->add_subcommand("iterate", "repeated exact application");
    qm_iter->add_option("--x", qt_x, "starting rational in [0,1]")->required();
    qm_iter->add_option("-n,--steps", qt_n, "number of applications");
    qm_iter->add_option("--sum-cap", qt_cap, "quotient-sum work cap per application");
    qm_iter->callback([&] {
        IterateLimits lim{Int(qt_cap)};
        Rat x = checked_unit_rat(qt_x);
        json its = json::array();
        Rat cur = x;
        for (unsigned i = 0; i < qt_n; ++i) {
            cur = iterate_qm(cur, 1, lim);
            its.push_back(jof(cur));
        }
        emit(json{{"input", jof(x)}, {"iterates", its}});
    });

    // ---- cf ----------------------------------------------------------------
    auto* cf = app.add_subcommand("cf", "continued fraction round trips");
    cf->require_subcommand(1);

    std::string cfof_x;
    auto* cf_of = cf->add_subcommand("of", "partial quotients of a rational in [0,1]");
    cf_of->add_option("--x", cfof_x)->required();
    cf_of->callback([&] {
        CF a = cf_from_rational(checked_unit_rat(cfof_x));
        emit(json{{"cf", jof(a)}});
    });

    std::string cfto_cf;
    auto* cf_to = cf->add_subcommand("to", "value of a quotient list");
    cf_to->add_option("--cf", cfto_cf)->required();
    cf_to->callback([&] {
        CF a = parse_cf(cfto_cf);
        if (!is_valid_cf(a)) throw cf_error("cf to: entries must be >= 1");
        emit(json{{"value", jof(cf_to_rational(a))}, {"continuant", continuant(a).get_str()}});
    });

    std::string cfc_cf;
    auto* cf_canon = cf->add_subcommand("canon", "canonical and alternate representations");
    cf_canon->add_option("--cf", cfc_cf)->required();
    cf_canon->callback([&] {
        CF a = parse_cf(cfc_cf);
        if (!is_valid_cf(a)) throw cf_error("cf canon: entries must be >= 1");
        CF c = canonicalize(a);
        json other = nullptr;
        if (!(c.empty() || (c.size() == 1 && c[0] == 1))) other = jof(other_representation(c));
        emit(json{{"canonical", jof(c)}, {"other", other}});
    });

    // ---- fold --------------------------------------------------------------
    auto* fold = app.add_subcommand("fold", "closed-form image of one appended boundary");
    fold->require_subcommand(1);

    std::string fs_image, fs_slack;
    std::size_t fs_plen = 0;
    unsigned long fs_bits = 1ul << 26;
    auto* fold_step_cmd = fold->add_subcommand(
        "step", "image quotients after appending the boundary entry");
    fold_step_cmd->add_option("--image", fs_image, "canonical image of the current prefix")
        ->required();
    fold_step_cmd->add_option("--prefix-len", fs_plen, "quotient count of the current prefix")
        ->required();
    fold_step_cmd->add_option("--slack", fs_slack, "s >= 0: the appended entry is sum + s")
        ->required();
    fold_step_cmd->add_option("--max-bits", fs_bits);
    fold_step_cmd->callback([&] {
        FoldResult r = fold_step(parse_cf(fs_image), fs_plen, parse_int(fs_slack), fs_bits);
        emit(jof(r));
    });

    std::string fb_image, fb_slack;
    std::size_t fb_plen = 0;
    unsigned long fb_bits = 1ul << 26;
    auto* fold_bounds_cmd = fold->add_subcommand(
        "bounds", "shared prefix and entry range over all continuations");
    fold_bounds_cmd->add_option("--image", fb_image)->required();
    fold_bounds_cmd->add_option("--prefix-len", fb_plen)->required();
    fold_bounds_cmd->add_option("--slack", fb_slack)->required();
    fold_bounds_cmd->add_option("--max-bits", fb_bits);
    fold_bounds_cmd->callback([&] {
        FoldBounds r = fold_range_bounds(parse_cf(fb_image), fb_plen, parse_int(fb_slack), fb_bits);
        emit(jof(r));
    });

    // ---- setm --------------------------------------------------------------
    auto* setm = app.add_subcommand("setm", "block specs with certified slow-decay slacks");
    setm->require_subcommand(1);

    SpecGenOptions gen_opt;
    bool gen_no_empty = false;
    auto* setm_gen = setm->add_subcommand("gen", "deterministic admissible spec");
    setm_gen->add_option("--num-blocks", gen_opt.num_blocks)->capture_default_str();
    setm_gen->add_option("--max-len", gen_opt.max_block_len)->capture_default_str();
    setm_gen->add_option("--max-entry", gen_opt.max_entry)->capture_default_str();
    setm_gen->add_option("--jitter", gen_opt.slack_jitter, "max extra slack above minimal")
        ->capture_default_str();
    setm_gen->add_option("--seed", gen_opt.seed)->capture_default_str();
    setm_gen->add_flag("--no-empty", gen_no_empty, "forbid empty blocks");
    setm_gen->callback([&] {
        gen_opt.allow_empty_blocks = !gen_no_empty;
        BlockSpec spec = generate_spec(gen_opt, kappa());
        json sig = json::array(), tau = json::array();
        for (const Int& v : sigma_sequence(spec)) sig.push_back(v.get_str());
        for (const Int& v : tau_sequence(spec)) tau.push_back(v.get_str());
        emit(json{{"spec", jof(spec)}, {"sigma", sig}, {"tau", tau}});
    });

    std::string cert_spec;
    bool cert_no_refine = false;
    auto* setm_cert = setm->add_subcommand("certify", "membership and image-side certificates");
    setm_cert->add_option("--spec", cert_spec, "spec JSON, or @file")->required();
    setm_cert->add_flag("--no-refine", cert_no_refine, "decide at the given width only");
    setm_cert->callback([&] {
        BlockSpec spec = parse_spec_arg(cert_spec);
        MembershipCertificate mc = certify_membership(spec, kappa(), !cert_no_refine);
        ImageCertificate ic = certify_image_membership(spec, kappa());
        emit(json{{"spec", jof(spec)}, {"membership", jof(mc)}, {"image", jof(ic)}});
        rc = verdict_exit(mc.verdict, ic.verdict);
    });

    std::string img_spec;
    std::size_t img_depth = 0;
    unsigned long img_bits = 4096;
    auto* setm_img = setm->add_subcommand("image", "materialized image prefix with measurements");
    setm_img->add_option("--spec", img_spec, "spec JSON, or @file")->required();
    setm_img->add_option("--depth", img_depth, "blocks to expand (default: all)");
    setm_img->add_option("--max-bits", img_bits)->capture_default_str();
    setm_img->callback([&] {
        BlockSpec spec = parse_spec_arg(img_spec);
        std::size_t depth = img_depth == 0 ? spec.blocks.size() : img_depth;
        ImagePrefixResult r = image_prefix(spec, depth, img_bits);
        json meas = json::array();
        for (const auto& m : measure_image_conditions(r, kappa())) meas.push_back(jof(m));
        emit(json{{"prefix", jof(expand_prefix(spec, std::max<std::size_t>(r.depth_reached, 1)))},
                  {"image", jof(r)},
                  {"measured", meas}});
        if (r.capped) rc = 3;
    });

    std::string avg_cf;
    auto* setm_avg = setm->add_subcommand("avg", "running quotient averages against the constant");
    setm_avg->add_option("--cf", avg_cf)->required();
    setm_avg->callback([&] {
        json rows = json::array();
        for (const auto& r : running_average(parse_cf(avg_cf), kappa())) rows.push_back(jof(r));
        emit(json{{"rows", rows}});
    });

    // ---- cahen -------------------------------------------------------------
    std::size_t ch_blocks = 5, ch_terms = 12, ch_digits = 200, ch_growth = 12;
    auto* cahen = app.add_subcommand("cahen", "the alternating Sylvester series constant");
    auto* cahen_verify = cahen->add_subcommand("verify", "certificates and expansion cross-checks");
    cahen_verify->add_option("--num-blocks", ch_blocks)->capture_default_str();
    cahen_verify->add_option("--terms", ch_terms, "series terms for the truncation")
        ->capture_default_str();
    cahen_verify->add_option("--digits", ch_digits, "decimal digits kept of the truncation")
        ->capture_default_str();
    cahen_verify->add_option("--growth-max", ch_growth, "verify q_n growth up to this n")
        ->capture_default_str();
    cahen_verify->callback([&] {
        KappaInterval ki = kappa();
        BlockSpec spec = cahen_spec(ch_blocks);
        MembershipCertificate mc = certify_membership(spec, ki);
        ImageCertificate ic = certify_image_membership(spec, ki);

        std::vector<Int> q =
            cahen_denominators(std::max(ch_growth + 1, ch_blocks + 3));
        json qj = json::array();
        for (const Int& v : q) qj.push_back(v.get_str());
        json growth = json::array();
        bool growth_ok = true;
        for (std::size_t n = 3; n <= ch_growth && n < q.size(); ++n) {
            bool holds = q[n] > (Int(1) << (1ul << (n - 3)));
            growth_ok = growth_ok && holds;
            growth.push_back(json{{"n", n}, {"holds", holds}});
        }

        Rat trunc = cahen_series_truncation(ch_terms);
        Int scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, ch_digits);
        Int scaled;
        {
            Rat t = trunc * Rat(scale);
            mpz_fdiv_q(scaled.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
        }
        Rat rounded = Rat(scaled) / Rat(scale);
        CF observed = cf_from_rational(rounded);
        CF expected;
        expected.push_back(1);
        for (const Int& v : q) expected.push_back(v * v);
        std::size_t stable = 0;
        while (stable < observed.size() && stable < expected.size() &&
               observed[stable] == expected[stable])
            ++stable;
        auto head = [&](const CF& a) {
            std::size_t n = std::min(a.size(), stable + 1);
            return CF(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n));
        };

        emit(json{{"spec", jof(spec)},
                  {"membership", jof(mc)},
                  {"image", jof(ic)},
                  {"q", qj},
                  {"growth", growth},
                  {"truncation", json{{"terms", ch_terms},
                                      {"digits", ch_digits},
                                      {"value", jof(rounded)},
                                      {"stable_quotients", stable},
                                      {"expected_prefix", jof(head(expected))},
                                      {"observed_prefix", jof(head(observed))}}}});
        rc = growth_ok ? verdict_exit(mc.verdict, ic.verdict) : 1;
    });

    // ---- deriv -------------------------------------------------------------
    auto* deriv = app.add_subcommand("deriv", "difference quotients across quotient cylinders");
    deriv->require_subcommand(1);

    std::string dt_prefix;
    std::vector<std::size_t> dt_ts;
    std::size_t dt_nmax = 2;
    unsigned long dt_cap = 1ul << 16;
    auto* deriv_table = deriv->add_subcommand("table", "decay table over prefix scales");
    deriv_table->add_option("--prefix", dt_prefix, "quotient list a1,a2,...")->required();
    deriv_table->add_option("--ts", dt_ts, "prefix lengths to include")
        ->required()
        ->delimiter(',');
    deriv_table->add_option("--n-max", dt_nmax)->capture_default_str();
    deriv_table->add_option("--sum-cap", dt_cap)->capture_default_str();
    deriv_table->callback([&] {
        IterateLimits lim{Int(dt_cap)};
        json rows = json::array();
        for (const auto& r : decay_table(parse_cf(dt_prefix), dt_ts, dt_nmax, lim))
            rows.push_back(jof(r));
        emit(json{{"rows", rows}});
    });

    std::string dc_prefix;
    std::size_t dc_n = 2;
    unsigned long dc_cap = 1ul << 16;
    auto* deriv_chain = deriv->add_subcommand("chain", "per-step width ratios that telescope");
    deriv_chain->add_option("--prefix", dc_prefix)->required();
    deriv_chain->add_option("-n,--steps", dc_n)->capture_default_str();
    deriv_chain->add_option("--sum-cap", dc_cap)->capture_default_str();
    deriv_chain->callback([&] {
        IterateLimits lim{Int(dc_cap)};
        CF prefix = parse_cf(dc_prefix);
        auto factors = chain_factors(prefix, dc_n, lim);
        Rat product(1);
        json fj = json::array();
        for (const auto& f : factors) {
            product *= f.factor;
            fj.push_back(jof(f));
        }
        DecayRow r = fn_difference_quotient(prefix, dc_n, lim);
        emit(json{{"factors", fj},
                  {"product", jof(product)},
                  {"difference_quotient", jof(r)}});
    });

    // ---- orbit -------------------------------------------------------------
    auto* orbit = app.add_subcommand("orbit", "iteration behaviour against the fixed points");
    orbit->require_subcommand(1);

    std::string ob_x;
    unsigned ob_maxn = 64;
    unsigned long ob_cap = 1ul << 16;
    auto* orbit_of = orbit->add_subcommand("of", "orbit of one rational");
    orbit_of->add_option("--x", ob_x)->required();
    orbit_of->add_option("--max-n", ob_maxn)->capture_default_str();
    orbit_of->add_option("--sum-cap", ob_cap)->capture_default_str();
    orbit_of->callback([&] {
        OrbitReport rep = fixed_point_orbit(checked_unit_rat(ob_x), ob_maxn, IterateLimits{Int(ob_cap)});
        emit(jof(rep));
    });

    unsigned long os_qmax = 50;
    unsigned os_maxn = 64;
    unsigned os_jobs = 1;
    unsigned long os_cap = 1ul << 16;
    auto* orbit_scan = orbit->add_subcommand("scan", "all reduced rationals up to a denominator");
    orbit_scan->add_option("--q-max", os_qmax)->capture_default_str();
    orbit_scan->add_option("--max-n", os_maxn)->capture_default_str();
    orbit_scan->add_option("--jobs", os_jobs, "worker threads")->capture_default_str();
    orbit_scan->add_option("--sum-cap", os_cap)->capture_default_str();
    orbit_scan->callback([&] {
        std::vector<Rat> inputs;
        inputs.emplace_back(0);
        inputs.emplace_back(1);
        for (unsigned long q = 2; q <= os_qmax; ++q)
            for (unsigned long p = 1; p < q; ++p)
                if (std::gcd(p, q) == 1) inputs.emplace_back(p, q);

        std::vector<OrbitReport> reps(inputs.size());
        IterateLimits lim{Int(os_cap)};
        unsigned jobs = std::max(1u, os_jobs);
        std::vector<std::thread> pool;
        std::size_t chunk = (inputs.size() + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            std::size_t b = t * chunk;
            std::size_t e = std::min(inputs.size(), b + chunk);
            if (b >= e) break;
            pool.emplace_back([&, b, e] {
                for (std::size_t i = b; i < e; ++i)
                    reps[i] = fixed_point_orbit(inputs[i], os_maxn, lim);
            });
        }
        for (auto& th : pool) th.join();

        emit(counts_json(reps));
        for (const auto& r : reps)
            if (r.classification == "unclassified" && !r.capped) rc = 3;
    });

    // ---- kappa -------------------------------------------------------------
    auto* kap = app.add_subcommand("kappa", "rational enclosure of the decay constant");
    kap->callback([&] {
        KappaInterval ki = kappa();
        emit(json{{"width", jof(parse_rat(kappa_width))}, {"interval", jof(ki)}});
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const cf_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cap_error& e) {
        std::cerr << "capped: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return rc;
}
