#include "betadyn/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "betadyn/cantor.hpp"
#include "betadyn/cylinders.hpp"
#include "betadyn/dimension.hpp"
#include "betadyn/estimation.hpp"
#include "betadyn/exponents.hpp"
#include "betadyn/words.hpp"

namespace betadyn::cli {

namespace {

using nlohmann::json;

struct Config {
    int precision_bits = 192;
    long depth = 100000;
    std::uint64_t seed = 0;
    std::string format = "json";
    int out_digits = 12;
};

double round_sig(double x, int sig) { return std::stod(format_double(x, sig)); }

json scalar_json(const Scalar& s, int sig) {
    json j;
    j["value"] = s.to_string(sig);
    if (!s.is_exact()) j["width"] = s.width();
    return j;
}

json integer_json(const Integer& z) {
    if (z.fits_slong_p() && (z < Integer(1) << 53))
        return json(static_cast<long long>(z.get_si()));
    return json(z.get_str());
}

json word_json(const Word& w) {
    json arr = json::array();
    for (int d : w) arr.push_back(d);
    return arr;
}

double parse_exponent(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    return std::stod(s);
}

BetaSystem make_system(const std::string& text, const Config& cfg) {
    PrecisionPolicy pol;
    pol.base_bits = cfg.precision_bits;
    return BetaSystem::from_string(text, pol);
}

void emit(std::ostream& out, const Config& cfg, const json& j) {
    if (cfg.format == "plain") {
        // flat key=value lines for quick shell use
        if (j.is_object()) {
            for (auto it = j.begin(); it != j.end(); ++it)
                out << it.key() << "=" << it.value().dump() << "\n";
            return;
        }
    }
    out << j.dump() << "\n";
}

BlockProfile parse_profile(const std::string& text) {
    BlockProfile p;
    if (text.empty()) return p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw DomainError("profile entries look like n:m");
        p.blocks.emplace_back(std::stol(item.substr(0, colon)), std::stol(item.substr(colon + 1)));
    }
    return p;
}

json level_row_json(const LevelRow& row) {
    json j;
    j["n"] = integer_json(row.n);
    j["m"] = integer_json(row.m);
    j["l"] = integer_json(row.l);
    j["h"] = integer_json(row.h);
    j["h_tilde"] = integer_json(row.h_tilde);
    j["t"] = integer_json(row.t);
    j["r"] = integer_json(row.r);
    j["t_bar"] = integer_json(row.t_bar);
    j["r_bar"] = integer_json(row.r_bar);
    j["t_tilde"] = integer_json(row.t_tilde);
    j["r_tilde"] = integer_json(row.r_tilde);
    return j;
}

json dimension_json(const DimensionResult& r, int sig) {
    json j;
    j["value"] = round_sig(r.value, sig);
    j["regime"] = regime_name(r.regime);
    j["proved"] = r.proved;
    if (r.argmax_v.has_value()) j["argmax_v"] = round_sig(*r.argmax_v, sig);
    return j;
}

json exponent_json(const ExponentEstimate& est, int sig) {
    json j;
    json pairs = json::array();
    for (const auto& p : est.records.pairs) pairs.push_back({p.n, p.m});
    j["pairs"] = pairs;
    j["v_est"] = round_sig(est.v_est, sig);
    j["vhat_est"] = round_sig(est.vhat_est, sig);
    j["v_est_global"] = round_sig(est.v_est_global, sig);
    j["vhat_est_global"] = round_sig(est.vhat_est_global, sig);
    j["depth"] = est.depth;
    return j;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"beta-expansion exponent and dimension toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    Config cfg;
    if (const char* env = std::getenv("BETADYN_PRECISION")) cfg.precision_bits = std::atoi(env);
    app.add_option("--precision", cfg.precision_bits, "interval precision in bits")
        ->check(CLI::Range(64, 1 << 20));
    app.add_option("--format", cfg.format, "output format: json|plain|csv (csv: cover only)")
        ->check(CLI::IsMember({"json", "plain", "csv"}));
    app.add_option("--digits", cfg.out_digits, "significant digits for real output");

    std::string beta, beta1, beta2, xs, ys, word, method = "auto", strategy = "both";
    std::string vhat_s = "0", v_s = "0", profile, sample = "none", xdigits, ydigits;
    long n = 0, N = 0, levels = 0, horizon = 0, trials = 10000, level_k = 0;
    std::uint64_t seed = 0;
    bool no_filter = false;

    auto* c_expand = app.add_subcommand("expand", "digits of x in base beta");
    c_expand->add_option("--beta", beta)->required();
    c_expand->add_option("--x", xs)->required();
    c_expand->add_option("--n", n)->required();

    auto* c_eps = app.add_subcommand("eps-star", "quasi-greedy expansion of 1");
    c_eps->add_option("--beta", beta)->required();
    c_eps->add_option("--n", n)->required();

    auto* c_betan = app.add_subcommand("beta-n", "truncation base beta_N");
    c_betan->add_option("--beta", beta)->required();
    c_betan->add_option("--N", N)->required();

    auto* c_adm = app.add_subcommand("admissible", "Parry admissibility of a word");
    c_adm->add_option("--beta", beta)->required();
    c_adm->add_option("--word", word)->required();

    auto* c_count = app.add_subcommand("count", "number of admissible words of length n");
    c_count->add_option("--beta", beta)->required();
    c_count->add_option("--n", n)->required();
    c_count->add_option("--method", method)->check(CLI::IsMember({"auto", "enumerate", "automaton"}));

    auto* c_cyl = app.add_subcommand("cylinder", "basic interval of a word");
    c_cyl->add_option("--beta", beta)->required();
    c_cyl->add_option("--word", word)->required();

    auto* c_exp = app.add_subcommand("exponents", "run records and exponent estimates of a pair");
    c_exp->add_option("--beta1", beta1)->required();
    c_exp->add_option("--beta2", beta2)->required();
    c_exp->add_option("--x", xs);
    c_exp->add_option("--y", ys);
    c_exp->add_option("--x-digits", xdigits);
    c_exp->add_option("--y-digits", ydigits);
    c_exp->add_option("--depth", cfg.depth);
    c_exp->add_flag("--no-filter", no_filter);

    auto* c_dime = app.add_subcommand("dim-e", "dimension of the intersection level set");
    c_dime->add_option("--beta1", beta1)->required();
    c_dime->add_option("--beta2", beta2)->required();
    c_dime->add_option("--vhat", vhat_s)->required();
    c_dime->add_option("--v", v_s)->required();

    auto* c_dimw = app.add_subcommand("dim-w", "dimension of the asymptotic level set");
    c_dimw->add_option("--beta1", beta1)->required();
    c_dimw->add_option("--beta2", beta2)->required();
    c_dimw->add_option("--v", v_s)->required();

    auto* c_dimu = app.add_subcommand("dim-u", "dimension of the uniform level set");
    c_dimu->add_option("--beta1", beta1)->required();
    c_dimu->add_option("--beta2", beta2)->required();
    c_dimu->add_option("--vhat", vhat_s)->required();

    auto* c_con = app.add_subcommand("construct", "level bookkeeping of the Cantor construction");
    c_con->add_option("--beta1", beta1)->required();
    c_con->add_option("--beta2", beta2)->required();
    c_con->add_option("--v", v_s)->required();
    c_con->add_option("--vhat", vhat_s)->required();
    c_con->add_option("--levels", levels)->required();
    c_con->add_option("--N", N);
    c_con->add_option("--sample", sample)->check(CLI::IsMember({"none", "zeros", "seeded"}));
    c_con->add_option("--seed", seed);
    c_con->add_option("--depth", cfg.depth);

    auto* c_meas = app.add_subcommand("measure", "exact mass of a basic square");
    c_meas->add_option("--beta1", beta1)->required();
    c_meas->add_option("--beta2", beta2)->required();
    c_meas->add_option("--v", v_s)->required();
    c_meas->add_option("--vhat", vhat_s)->required();
    c_meas->add_option("--levels", levels)->required();
    c_meas->add_option("--k", level_k)->required();
    c_meas->add_option("--N", N);

    auto* c_cover = app.add_subcommand("cover", "covering counts for the asymptotic set");
    c_cover->add_option("--beta1", beta1)->required();
    c_cover->add_option("--beta2", beta2)->required();
    c_cover->add_option("--v", v_s)->required();
    c_cover->add_option("--n", n)->required();
    c_cover->add_option("--strategy", strategy)->check(CLI::IsMember({"small", "large", "both"}));

    auto* c_blk = app.add_subcommand("blocked", "pairs with forced zero blocks");
    c_blk->add_option("--beta1", beta1)->required();
    c_blk->add_option("--beta2", beta2)->required();
    c_blk->add_option("--n", n)->required();
    c_blk->add_option("--profile", profile);

    auto* c_mc = app.add_subcommand("mc-hits", "Monte Carlo hit statistics");
    c_mc->add_option("--beta1", beta1)->required();
    c_mc->add_option("--beta2", beta2)->required();
    c_mc->add_option("--v", v_s)->required();
    c_mc->add_option("--N", horizon)->required();
    c_mc->add_option("--trials", trials);
    c_mc->add_option("--seed", seed);

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help() << std::flush;
            return 0;
        }
        err << e.what() << "\n";
        return 1;
    }

    try {
        json j;
        if (*c_expand) {
            BetaSystem sys = make_system(beta, cfg);
            Word w = sys.digits(Scalar::parse(xs, cfg.precision_bits), n);
            j["digits"] = word_json(w);
        } else if (*c_eps) {
            BetaSystem sys = make_system(beta, cfg);
            j["digits"] = word_json(sys.epsilon_star(n));
            SimpleParry sp = sys.simple_parry();
            json p;
            p["status"] = sp.status == ParryStatus::Yes ? "yes" : "no-within-depth";
            if (sp.status == ParryStatus::Yes) {
                p["terminal_index"] = sp.terminal_index;
                p["last_digit"] = sp.last_digit;
            } else {
                p["probed_depth"] = sp.probed_depth;
            }
            j["simple_parry"] = p;
        } else if (*c_betan) {
            BetaSystem sys = make_system(beta, cfg);
            j = scalar_json(sys.beta_truncation(static_cast<int>(N)), cfg.out_digits);
            j["N"] = N;
        } else if (*c_adm) {
            BetaSystem sys = make_system(beta, cfg);
            j["admissible"] = is_admissible(sys, word_from_string(word));
        } else if (*c_count) {
            BetaSystem sys = make_system(beta, cfg);
            CountMethod m = method == "enumerate" ? CountMethod::Enumerate
                          : method == "automaton" ? CountMethod::Automaton
                                                  : CountMethod::Auto;
            j["count"] = integer_json(count_words(sys, n, m));
        } else if (*c_cyl) {
            BetaSystem sys = make_system(beta, cfg);
            Word w = word_from_string(word);
            Cylinder c = cylinder(sys, w);
            j["word"] = word_json(c.word);
            j["left"] = c.left.to_string(cfg.out_digits);
            j["right"] = c.right.to_string(cfg.out_digits);
            j["length"] = (c.right - c.left).to_string(cfg.out_digits);
            j["full"] = is_full(sys, w);
        } else if (*c_exp) {
            BetaSystem s1 = make_system(beta1, cfg), s2 = make_system(beta2, cfg);
            DigitStream dx, dy;
            if (!xdigits.empty() || !ydigits.empty()) {
                if (xdigits.empty() || ydigits.empty())
                    throw DomainError("both --x-digits and --y-digits are required together");
                dx = DigitStream::from_word(word_from_string(xdigits));
                dy = DigitStream::from_word(word_from_string(ydigits));
            } else {
                if (xs.empty() || ys.empty())
                    throw DomainError("supply --x/--y or --x-digits/--y-digits");
                dx = DigitStream::expansion(s1, Scalar::parse(xs, cfg.precision_bits));
                dy = DigitStream::expansion(s2, Scalar::parse(ys, cfg.precision_bits));
            }
            RunRecord rec = run_records(dx, dy, cfg.depth, !no_filter);
            j = exponent_json(estimate_exponents(rec), cfg.out_digits);
        } else if (*c_dime) {
            BetaSystem s1 = make_system(beta1, cfg), s2 = make_system(beta2, cfg);
            j = dimension_json(dim_e(s1, s2, parse_exponent(vhat_s), parse_exponent(v_s)),
                               cfg.out_digits);
        } else if (*c_dimw) {
            BetaSystem s1 = make_system(beta1, cfg), s2 = make_system(beta2, cfg);
            j = dimension_json(dim_w(s1, s2, parse_exponent(v_s)), cfg.out_digits);
        } else if (*c_dimu) {
            BetaSystem s1 = make_system(beta1, cfg), s2 = make_system(beta2, cfg);
            j = dimension_json(dim_u(s1, s2, parse_exponent(vhat_s)), cfg.out_digits);
        } else if (*c_con) {
            BetaSystem s1 = make_system(beta1, cfg), s2 = make_system(beta2, cfg);
            TargetSequences seq =
                target_sequences(parse_exponent(v_s), parse_exponent(vhat_s), static_cast<int>(levels));
            LevelSpec spec = level_spec(seq, s1, s2, static_cast<int>(N));
            j["N"] = spec.N;
            j["n1_scale"] = spec.n1_scale;
            json rows = json::array();
            for (const auto& row : spec.rows) rows.push_back(level_row_json(row));
            j["levels"] = rows;
            if (sample != "none") {
                SlotFill fill = sample == "zeros" ? SlotFill::zeros() : SlotFill::seeded(seed);
                auto [dx, dy] = sample_point(spec, fill);
                RunRecord rec = run_records(dx, dy, cfg.depth, true);
                json s = exponent_json(estimate_exponents(rec), cfg.out_digits);
                long show = std::min<long>(cfg.depth, 256);
                auto value_of = [](const Word& w, double beta) {
                    double acc = 0;
                    for (size_t i = w.size(); i-- > 0;) acc = (acc + w[i]) / beta;
                    return acc;
                };
                Word xw, yw;
                for (long i = 1; i <= dx.available(show); ++i) xw.push_back(dx.digit(i));
                for (long i = 1; i <= dy.available(show); ++i) yw.push_back(dy.digit(i));
                s["x_prefix"] = word_json(xw);
                s["y_prefix"] = word_json(yw);
                s["x_value"] = round_sig(value_of(xw, s1.beta_d()), cfg.out_digits);
                s["y_value"] = round_sig(value_of(yw, s2.beta_d()), cfg.out_digits);
                j["sample"] = s;
            }
        } else if (*c_meas) {
            BetaSystem s1 = make_system(beta1, cfg), s2 = make_system(beta2, cfg);
            TargetSequences seq =
                target_sequences(parse_exponent(v_s), parse_exponent(vhat_s), static_cast<int>(levels));
            LevelSpec spec = level_spec(seq, s1, s2, static_cast<int>(N));
            int k = static_cast<int>(level_k);
            Rational mr = rectangle_measure(spec, k);
            Rational mq = square_measure(spec, k);
            LocalDimension ld = local_dimension(spec, k);
            auto log10_of = [](const Rational& q) {
                signed long en, ed;
                double dn = mpz_get_d_2exp(&en, q.get_num().get_mpz_t());
                double dd = mpz_get_d_2exp(&ed, q.get_den().get_mpz_t());
                return (std::log10(dn) + static_cast<double>(en) * std::log10(2.0)) -
                       (std::log10(dd) + static_cast<double>(ed) * std::log10(2.0));
            };
            j["k"] = k;
            j["mu_rectangle"] = mr.get_str();
            j["mu_square"] = mq.get_str();
            j["mu_square_log10"] = round_sig(log10_of(mq), cfg.out_digits);
            j["local_dimension"] = round_sig(ld.ratio, cfg.out_digits);
            j["s_closed_form"] = round_sig(ld.s_closed_form, cfg.out_digits);
        } else if (*c_cover) {
            BetaSystem s1 = make_system(beta1, cfg), s2 = make_system(beta2, cfg);
            double v = parse_exponent(v_s);
            json rows = json::array();
            auto one = [&](CoverStrategy st) {
                CoverReport rep = cover_w(s1, s2, v, n, st);
                json r;
                r["n"] = rep.n;
                r["strategy"] = st == CoverStrategy::SmallSquare ? "small" : "large";
                r["count"] = integer_json(rep.count);
                r["exponent"] = round_sig(rep.exponent, cfg.out_digits);
                return r;
            };
            if (cfg.format == "csv") {
                out << "n,strategy,count,exponent\n";
            }
            if (strategy == "small" || strategy == "both") rows.push_back(one(CoverStrategy::SmallSquare));
            if (strategy == "large" || strategy == "both") rows.push_back(one(CoverStrategy::LargeSquare));
            if (cfg.format == "csv") {
                for (const auto& r : rows)
                    out << r["n"] << "," << r["strategy"].get<std::string>() << ","
                        << r["count"].dump() << "," << r["exponent"] << "\n";
                return 0;
            }
            j["covers"] = rows;
        } else if (*c_blk) {
            BetaSystem s1 = make_system(beta1, cfg), s2 = make_system(beta2, cfg);
            j["count"] = integer_json(count_blocked(s1, s2, parse_profile(profile), n));
        } else if (*c_mc) {
            BetaSystem s1 = make_system(beta1, cfg), s2 = make_system(beta2, cfg);
            HitStats hs = hit_statistics(s1, s2, parse_exponent(v_s), horizon, trials, seed);
            j["mean_hits"] = round_sig(hs.mean_hits, cfg.out_digits);
            j["expected"] = round_sig(hs.expected, cfg.out_digits);
            j["std_error"] = round_sig(hs.std_error, cfg.out_digits);
            j["trials"] = hs.trials;
        }
        emit(out, cfg, j);
        return 0;
    } catch (const Error& e) {
        json j;
        j["error"] = {{"message", e.what()}};
        out << j.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json j;
        j["error"] = {{"message", e.what()}};
        out << j.dump() << "\n";
        return 2;
    }
}

} // namespace betadyn::cli
