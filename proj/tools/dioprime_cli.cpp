// dioprime: command-line front end for the experiments.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dioprime.hpp"
#include "dioprime/acceptance.hpp"

namespace {

using nlohmann::json;
using namespace dioprime;

struct CommonFlags {
  std::uint64_t x = 0, y = 0, budget = 0, seed = 0;
  double delta = 0.0, eps = 0.0;
  std::string alpha, precision, q_policy, format = "json", out, config;
  CLI::Option *o_x{}, *o_y{}, *o_delta{}, *o_eps{}, *o_alpha{}, *o_precision{}, *o_q_policy{}, *o_budget{}, *o_seed{},
      *o_format{};

  void attach(CLI::App* app) {
    o_x = app->add_option("--x", x, "right end X of the interval (X - Y, X]");
    o_y = app->add_option("--y", y, "interval length Y");
    o_delta = app->add_option("--delta", delta, "angle width delta in (0, 1/2]");
    o_eps = app->add_option("--eps", eps, "exponent epsilon");
    o_alpha = app->add_option("--alpha", alpha, "sqrt:d | surd:a,b,c,d | cf:a0;pre;period | golden");
    o_precision = app->add_option("--precision", precision, "angle error target, e.g. 2^-40");
    o_q_policy = app->add_option("--q-policy", q_policy, "strict | nearest")->check(CLI::IsMember({"strict", "nearest"}));
    o_budget = app->add_option("--budget", budget, "inner-operation budget");
    o_seed = app->add_option("--seed", seed, "seed for randomized sampling");
    o_format = app->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--out", out, "write output here instead of stdout");
    app->add_option("--config", config, "JSON config file");
  }

  ExperimentConfig build() const {
    json j = json::object();
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) fail(errc::kConfig, "cannot open config file " + config);
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        fail(errc::kParse, std::string("config file: ") + e.what());
      }
    }
    if (*o_x) j["X"] = x;
    if (*o_y) j["Y"] = y;
    if (*o_delta) j["delta"] = delta;
    if (*o_eps) j["eps"] = eps;
    if (*o_alpha) j["alpha"] = alpha;
    if (*o_precision) j["precision"] = precision;
    if (*o_q_policy) j["q_policy"] = q_policy;
    if (*o_budget) j["budget"] = budget;
    if (*o_seed) j["seed"] = seed;
    if (*o_format) j["format"] = format;
    return ExperimentConfig::from_json(j);
  }

  void emit(const std::string& text) const {
    if (out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) fail(errc::kConfig, "cannot write " + out);
    f << text;
  }
};

std::string render(const SumReport& r, const ExperimentConfig& c) {
  if (c.format == "csv") return sweep_csv({SweepRow{0, c.to_json(), r, "", ""}});
  return report_json(r, c).dump(2) + "\n";
}

std::string big(const BigInt& v) { return v.str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments on primes p with ||p alpha|| small in short intervals"};
  app.require_subcommand(1);
  // Common flags live on the top-level app; subcommands fall through to them.
  app.fallthrough();
  CommonFlags flags;
  flags.attach(&app);

  auto* convergents_cmd = app.add_subcommand("convergents", "continued fraction terms and convergents of alpha");
  std::size_t count = 20;
  convergents_cmd->add_option("--count", count, "number of convergents")->check(CLI::PositiveNumber);

  auto* angle_cmd = app.add_subcommand("angle", "certified ||n alpha||");
  std::uint64_t angle_n = 1;
  angle_cmd->add_option("--n", angle_n, "the integer n")->required();

  auto* sieve_cmd = app.add_subcommand("sieve", "primes and prime powers in (X - Y, X]");
  auto* psi_cmd = app.add_subcommand("psi", "psi(X) - psi(X - Y)");
  auto* count_cmd = app.add_subcommand("count", "primes in (X - Y, X] with ||p alpha|| < delta");
  auto* ssum_cmd = app.add_subcommand("ssum", "smoothed sum of Lambda(n) F(n alpha) over (X - Y, X]");

  auto* vaughan_cmd = app.add_subcommand("vaughan-check", "verify Lambda = A1 - A2 - A3 for U < n <= N");
  double vu = 4.0, vv = 4.0;
  std::uint64_t vn = 5000;
  vaughan_cmd->add_option("--u", vu, "U >= 1");
  vaughan_cmd->add_option("--v", vv, "V >= 1");
  vaughan_cmd->add_option("--n-max", vn, "largest n checked");

  auto* minsum_cmd = app.add_subcommand("minsum", "sum_{m<=M} min(N, 1/||m alpha||) and the standard estimate");
  std::uint64_t ms_m = 100, ms_q = 0;
  double ms_n = 100.0;
  minsum_cmd->add_option("--m", ms_m, "M")->required();
  minsum_cmd->add_option("--n", ms_n, "N >= 1")->required();
  minsum_cmd->add_option("--q", ms_q, "denominator q (default: largest convergent q <= M)");

  auto* t1_cmd = app.add_subcommand("t1", "type I block T1(H)");
  double t1_h = 1.0;
  t1_cmd->add_option("--H", t1_h, "block top H")->required();

  auto* t2_cmd = app.add_subcommand("t2", "type II block T2(H, M) with the T3 split and bound chain");
  double t2_h = 1.0, t2_m = 1.0;
  t2_cmd->add_option("--H", t2_h, "block top H")->required();
  t2_cmd->add_option("--M", t2_m, "block top M")->required();

  auto* bounds_cmd = app.add_subcommand("bounds", "bound suite over the dyadic grid");
  auto* admissible_cmd = app.add_subcommand("admissible", "check the hypotheses and the q-window");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep generator (--config is the generator file)");

  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  std::vector<int> only;
  verify_cmd->add_option("--criteria", only, "subset of criteria ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*convergents_cmd) {
      const auto cfg = flags.build();
      const auto conv = convergents(cfg.alpha, std::max<std::size_t>(count, 2));
      const auto terms = cf_terms(cfg.alpha, conv.size());
      if (cfg.format == "csv") {
        std::ostringstream os;
        os << "index,a,p,q\n";
        for (std::size_t i = 0; i < conv.size(); ++i) os << i << "," << terms[i] << "," << big(conv[i].p) << "," << big(conv[i].q) << "\n";
        flags.emit(os.str());
      } else {
        json arr = json::array();
        for (std::size_t i = 0; i < conv.size(); ++i)
          arr.push_back({{"index", i}, {"a", terms[i]}, {"p", big(conv[i].p)}, {"q", big(conv[i].q)}});
        flags.emit(json{{"alpha", cfg.alpha.to_string()}, {"convergents", arr}}.dump(2) + "\n");
      }
    } else if (*angle_cmd) {
      const auto cfg = flags.build();
      const auto oracle = AngleOracle::build(cfg.alpha, angle_n, cfg.precision);
      const auto d = oracle.dist_nearest_int(angle_n);
      json j = {{"alpha", cfg.alpha.to_string()},
                {"n", angle_n},
                {"frac", oracle.frac(static_cast<std::int64_t>(angle_n))},
                {"dist", d.value},
                {"error_bound", d.error},
                {"anchor_q", big(oracle.anchor().q)}};
      if (*flags.o_delta) {
        const auto c = oracle.compare_below(angle_n, cfg.delta);
        j["below_delta"] = c == Comparison::Below ? "yes" : (c == Comparison::NotBelow ? "no" : "boundary");
      }
      flags.emit(j.dump(2) + "\n");
    } else if (*sieve_cmd) {
      const auto cfg = flags.build();
      const auto s = sieve_interval(cfg.X - cfg.Y, cfg.X);
      json powers = json::array();
      for (const auto& pp : s.higher_powers()) powers.push_back({{"n", pp.n}, {"p", pp.p}, {"k", pp.k}});
      json j = {{"lo", s.lo()}, {"hi", s.hi()}, {"prime_count", s.prime_count()}, {"higher_prime_powers", powers}};
      if (s.prime_count() <= 1000) {
        json primes = json::array();
        s.for_each_prime([&](std::uint64_t p) { primes.push_back(p); });
        j["primes"] = primes;
      }
      flags.emit(j.dump(2) + "\n");
    } else if (*psi_cmd) {
      const auto cfg = flags.build();
      SumReport r;
      r.value = mangoldt_sum_interval(cfg.X, cfg.Y);
      r.set_main_term(static_cast<double>(cfg.Y));
      r.set_measured_exponent(std::abs(r.value - static_cast<double>(cfg.Y)) / static_cast<double>(cfg.Y),
                              static_cast<double>(cfg.X));
      flags.emit(render(r, cfg));
    } else if (*count_cmd) {
      const auto cfg = flags.build();
      flags.emit(render(run_prime_count(cfg), cfg));
    } else if (*ssum_cmd) {
      const auto cfg = flags.build();
      flags.emit(render(run_smoothed_sum(cfg), cfg));
    } else if (*vaughan_cmd) {
      const VaughanParams params{vu, vv};
      params.validate(vn);
      const SmallTables tables(vn);
      std::uint64_t checked = 0, failures = 0;
      double worst = 0.0;
      for (auto n = static_cast<std::uint64_t>(vu) + 1; n <= vn; ++n) {
        const double diff = std::abs(tables.mangoldt(n) - vaughan_pieces(n, params, tables).combined());
        worst = std::max(worst, diff);
        ++checked;
        if (diff > 1e-9) ++failures;
      }
      flags.emit(json{{"U", vu}, {"V", vv}, {"n_max", vn}, {"checked", checked}, {"failures", failures}, {"max_abs_diff", worst}}.dump(2) +
                 "\n");
      return failures == 0 ? 0 : 1;
    } else if (*minsum_cmd) {
      const auto cfg = flags.build();
      std::uint64_t q = ms_q;
      if (q == 0) {
        for (const auto& c : convergents(cfg.alpha, 200)) {
          if (c.q > BigInt(ms_m)) break;
          q = static_cast<std::uint64_t>(c.q);
        }
      }
      const auto oracle = AngleOracle::build(cfg.alpha, std::max<std::uint64_t>(ms_m, 1), cfg.precision);
      const auto ms = min_sum(oracle, ms_m, ms_n);
      const auto est = standard_estimate_bound(static_cast<double>(std::max<std::uint64_t>(ms_m, 1)), ms_n, static_cast<double>(q));
      flags.emit(json{{"alpha", cfg.alpha.to_string()},
                      {"M", ms_m},
                      {"N", ms_n},
                      {"q", q},
                      {"q_is_dio", satisfies_dio(cfg.alpha, BigInt(q)).has_value()},
                      {"min_sum", ms.value},
                      {"flagged", ms.flagged},
                      {"estimate", est.value},
                      {"branch", to_string(est.branch)},
                      {"ratio", ms.value / est.value}}
                     .dump(2) +
                 "\n");
    } else if (*t1_cmd || *t2_cmd) {
      const auto cfg = flags.build();
      const auto qc = select_q(cfg);
      const auto ctx = make_sum_context(cfg, qc);
      if (*t1_cmd) {
        flags.emit(render(t1_sum(t1_h, ctx), cfg));
      } else {
        auto r = t2_sum(t2_h, t2_m, ctx);
        const auto split = t3_t4_t5_split(t2_h, t2_m, ctx);
        r.bound_terms["T4.re"] = split.t4.real();
        r.bound_terms["T4.im"] = split.t4.imag();
        r.bound_terms["T5.re"] = split.t5.real();
        r.bound_terms["T5.im"] = split.t5.imag();
        r.bound_terms["split_residual"] = split.identity_residual;
        for (const auto& [k, v] : t2_bound_chain(t2_h, t2_m, ctx).named()) r.bound_terms["chain." + k] = v;
        flags.emit(render(r, cfg));
      }
    } else if (*bounds_cmd) {
      const auto cfg = flags.build();
      const auto suite = run_bound_suite(cfg);
      flags.emit(suite.report.dump(2) + "\n");
      return suite.summary.ok() ? 0 : 1;
    } else if (*admissible_cmd) {
      const auto cfg = flags.build();
      const auto adm = check_admissible(cfg);
      json j = adm.to_json();
      try {
        const auto qc = select_q(cfg);
        j["q_used"] = qc.q();
        j["q_in_window"] = qc.in_window;
      } catch (const Error& e) {
        j["q_error"] = e.code();
      }
      j["config_echo"] = cfg.to_json();
      flags.emit(j.dump(2) + "\n");
      return adm.admissible() ? 0 : 2;
    } else if (*sweep_cmd) {
      if (flags.config.empty()) fail(errc::kConfig, "sweep needs --config <generator.json>");
      std::ifstream in(flags.config);
      if (!in) fail(errc::kConfig, "cannot open " + flags.config);
      json spec_json;
      try {
        spec_json = json::parse(in);
      } catch (const json::parse_error& e) {
        fail(errc::kParse, e.what());
      }
      const auto rows = sweep(SweepSpec::from_json(spec_json));
      flags.emit(flags.format == "csv" ? sweep_csv(rows) : sweep_json(rows).dump(2) + "\n");
    } else if (*verify_cmd) {
      const std::uint64_t seed = *flags.o_seed ? flags.seed : ExperimentConfig{}.seed;
      const auto results = acceptance::run_acceptance(seed, only);
      bool all = true;
      for (const auto& r : results) {
        std::cerr << r.line() << "\n";
        all = all && r.ok();
      }
      flags.emit(acceptance::acceptance_json(results, seed).dump(2) + "\n");
      return all ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
