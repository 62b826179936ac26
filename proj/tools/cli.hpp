#pragma once

// Command-line front end. `run` takes explicit streams so tests can drive it
// in-process.
//
// Exit codes: 0 for any verdict (unique, ambiguous, not_covered), 2 for
// malformed input or usage errors, 1 for other failures.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "sparsepr/coefficients.hpp"
#include "sparsepr/core.hpp"
#include "sparsepr/ingest.hpp"
#include "sparsepr/multidim.hpp"
#include "sparsepr/projection.hpp"
#include "sparsepr/sweep.hpp"
#include "sparsepr/synthetic.hpp"
#include "sparsepr/turnpike.hpp"

namespace sparsepr::cli {

using io::json;

namespace detail {

template <typename T>
struct Tag {
  using type = T;
};

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool pretty = false;
  std::string mode;  // empty: infer from the document
  Tolerance tol{};
  std::uint64_t seed = 0;

  void emit(const json& j) const { out << (pretty ? j.dump(2) : j.dump()) << "\n"; }

  json read(const std::string& path) const {
    std::string text;
    if (path.empty() || path == "-") {
      text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
      std::ifstream file(path);
      if (!file) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
      text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
    }
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, std::string("malformed JSON in ") + (path.empty() ? "-" : path) + ": " + e.what());
    }
  }

  io::ScalarMode resolve(const json& doc, io::ScalarMode fallback) const {
    if (!mode.empty()) return io::parse_mode(mode);
    if (doc.is_null()) return fallback;
    return io::infer_mode(doc);
  }

  template <typename F>
  auto dispatch(io::ScalarMode m, F&& f) const {
    if (m == io::ScalarMode::Exact) return f(Tag<Rational>{});
    return f(Tag<double>{});
  }
};

inline Tolerance tolerance_from_env() {
  Tolerance tol;
  if (const char* env = std::getenv("SPARSEPR_EPS"); env != nullptr && *env != '\0') {
    try {
      const double eps = std::stod(env);
      if (!(eps > 0)) throw std::invalid_argument("non-positive");
      tol.position = tol.coefficient = eps;
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, std::string("SPARSEPR_EPS is not a positive number: ") + env);
    }
  }
  return tol;
}

template <Scalar T>
json recover_doc(const Context& ctx, const DeltaAcf<T>& acf, std::size_t attempts, std::size_t directions) {
  if (acf.dim() == 1) return io::verdict_to_json(classify_uniqueness_1d(acf, ctx.tol));
  RecoverOptions opt;
  opt.seed = ctx.seed;
  opt.max_attempts = attempts;
  if (directions > 0) opt.directions = directions;
  opt.tol = ctx.tol;
  return io::verdict_to_json(recover_multidim(acf, opt).verdict);
}

template <Scalar T>
std::vector<Point<T>> support_from_json(const json& doc, const Tolerance& tol) {
  std::vector<Point<T>> support;
  if (doc.is_object()) {
    for (const auto& s : io::signal_from_json<T>(doc, tol).spikes()) support.push_back(s.position);
    return support;
  }
  if (!doc.is_array()) throw Error(ErrorKind::ParseError, "support must be a signal document or an array of positions");
  for (const auto& p : doc) {
    if (p.is_array()) support.push_back(io::vector_from_json<T>(p));
    else support.push_back({io::scalar_from_json<T>(p)});
  }
  return support;
}

inline json unwrap_list(const json& doc, const char* key) {
  if (doc.is_object() && doc.contains(key)) return doc.at(key);
  if (!doc.is_array()) throw Error(ErrorKind::ParseError, std::string("expected an array or an object with \"") + key + "\"");
  return doc;
}

inline json ingest_doc(const IngestResult& r, std::ostream& err) {
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  auto doc = io::acf_to_json(r.acf);
  doc["threshold"] = r.threshold;
  return doc;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  detail::Context ctx{in, out, err};
  CLI::App app{"Sparse phase retrieval from delta-train autocorrelations", "sparsepr"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<double> eps;
  app.add_flag("--pretty", ctx.pretty, "Indent JSON output");
  app.add_option("--mode", ctx.mode, "Scalar mode; inferred from the input when omitted")
      ->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--eps", eps, "Tolerance on positions and coefficients (floating mode)")->check(CLI::PositiveNumber);
  app.add_option("--seed", ctx.seed, "Random seed");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random signal");
  synthetic::SignalSpec spec;
  std::string bekir;
  std::string branch = "X";
  gen->add_option("--dim", spec.dim, "Dimension")->check(CLI::PositiveNumber);
  gen->add_option("--n", spec.n, "Number of spikes")->check(CLI::PositiveNumber);
  gen->add_option("--span", spec.span, "Positions drawn from [0, span]^D");
  gen->add_option("--max-coef", spec.max_coef, "Coefficients drawn from [-c, c] without 0");
  gen->add_flag("--collision-free", spec.collision_free, "Redraw until collision-free");
  gen->add_option("--bekir", bekir, "Emit the Bekir support for p1,p2 (unit coefficients)");
  gen->add_option("--branch", branch, "Bekir branch")->check(CLI::IsMember({"X", "Y", "x", "y"}));

  // acf
  auto* acf_cmd = app.add_subcommand("acf", "ACF of a signal");
  std::string input;
  bool half = false;
  acf_cmd->add_option("input", input, "Signal JSON (default stdin)");
  acf_cmd->add_flag("--half", half, "Emit the zero and positive lags only");

  // solve1d
  auto* solve1d = app.add_subcommand("solve1d", "Classify a 1-D ACF or a bare difference list");
  solve1d->add_option("input", input, "ACF JSON or difference array (default stdin)");

  // classify
  std::size_t attempts = 64;
  std::size_t directions = 0;
  auto* classify = app.add_subcommand("classify", "Verdict plus collision and visibility reports");
  classify->add_option("input", input, "ACF JSON (default stdin)");
  classify->add_option("--attempts", attempts, "Attempt budget per direction")->check(CLI::PositiveNumber);
  classify->add_option("--directions", directions, "Number of projection directions");

  // recover
  auto* recover = app.add_subcommand("recover", "Recover a signal from its ACF");
  recover->add_option("input", input, "ACF JSON (default stdin)");
  recover->add_option("--attempts", attempts, "Attempt budget per direction")->check(CLI::PositiveNumber);
  recover->add_option("--directions", directions, "Number of projection directions");

  // coeffs
  std::string support_path;
  std::string acf_path;
  auto* coeffs = app.add_subcommand("coeffs", "Coefficients for a known support");
  coeffs->add_option("support", support_path, "Support: signal JSON or array of positions")->required();
  coeffs->add_option("acf", acf_path, "ACF JSON")->required();

  // ingest
  double tau = 1e-6;
  double floor = 1e-6;
  std::string psd_path;
  auto* ingest = app.add_subcommand("ingest", "Fourier magnitudes to an ACF");
  ingest->require_subcommand(1);
  auto* magnitude = ingest->add_subcommand("magnitude", "Grid of |F|^2");
  magnitude->add_option("input", input, "Grid JSON (default stdin)");
  auto* speckle = ingest->add_subcommand("speckle", "Stack of speckle frames");
  speckle->add_option("input", input, "Array of grids, or {\"frames\": [...]}")->required();
  speckle->add_option("psd", psd_path, "Atmosphere power grid")->required();
  speckle->add_option("--floor", floor, "Relative psd floor kappa")->check(CLI::NonNegativeNumber);
  auto* channel = ingest->add_subcommand("channel", "Channel output samples");
  channel->add_option("input", input, "Array of sample vectors, or {\"samples\": [...]}");
  for (auto* sub : {magnitude, speckle, channel}) {
    sub->add_option("--tau", tau, "Relative delta threshold")->check(CLI::NonNegativeNumber);
  }

  // oracle sweep
  std::size_t sweep_n = 5;
  long long sweep_bound = 12;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force cross-checks");
  oracle_cmd->require_subcommand(1);
  auto* sweep = oracle_cmd->add_subcommand("sweep", "Turnpike solver against exhaustive enumeration");
  sweep->add_option("--n", sweep_n, "Largest support size")->check(CLI::Range(2, 8));
  sweep->add_option("--bound", sweep_bound, "Largest support element")->check(CLI::Range(1, 40));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    ctx.tol = detail::tolerance_from_env();
    if (eps) ctx.tol.position = ctx.tol.coefficient = *eps;

    if (gen->parsed()) {
      const auto m = ctx.mode.empty() ? io::ScalarMode::Exact : io::parse_mode(ctx.mode);
      return ctx.dispatch(m, [&](auto tag) {
        using T = typename decltype(tag)::type;
        if (!bekir.empty()) {
          const auto comma = bekir.find(',');
          if (comma == std::string::npos) throw Error(ErrorKind::ParseError, "--bekir expects p1,p2");
          const T p1 = static_cast<T>(parse_rational(bekir.substr(0, comma)));
          const T p2 = static_cast<T>(parse_rational(bekir.substr(comma + 1)));
          if (spec.dim != 1 || spec.n != 6) err << "note: --bekir emits a 1-D six-point support\n";
          const auto pair = generate_bekir_pair(p1, p2, true, ctx.tol);
          ctx.emit(io::signal_to_json((branch == "Y" || branch == "y") ? pair.y : pair.x));
          return 0;
        }
        std::mt19937_64 rng(ctx.seed);
        ctx.emit(io::signal_to_json(synthetic::random_signal<T>(rng, spec)));
        return 0;
      });
    }

    if (acf_cmd->parsed()) {
      const auto doc = ctx.read(input);
      return ctx.dispatch(ctx.resolve(doc, io::ScalarMode::Exact), [&](auto tag) {
        using T = typename decltype(tag)::type;
        const auto acf = compute_acf(io::signal_from_json<T>(doc, ctx.tol), ctx.tol);
        ctx.emit(io::acf_to_json(half ? half_support(acf, ctx.tol) : acf));
        return 0;
      });
    }

    if (solve1d->parsed()) {
      const auto doc = ctx.read(input);
      return ctx.dispatch(ctx.resolve(doc, io::ScalarMode::Exact), [&](auto tag) {
        using T = typename decltype(tag)::type;
        if (doc.is_array()) {
          const DifferenceMultiset<T> diffs(io::vector_from_json<T>(doc), ctx.tol);
          const auto sv = support_uniqueness(diffs, ctx.tol);
          using K = typename SupportVerdict<T>::Kind;
          std::vector<SpikeSignal<T>> supports;
          for (const auto& c : sv.supports) supports.push_back(c.representative);
          UniquenessVerdict<T> v = UniquenessVerdict<T>::not_covered("collisions");
          if (sv.kind == K::UniqueSupport) v = UniquenessVerdict<T>::unique(supports.front());
          else if (sv.kind == K::TwoSupports) v = UniquenessVerdict<T>::ambiguous(supports);
          else if (sv.kind == K::NoSupport) v = UniquenessVerdict<T>::not_covered("no_support");
          ctx.emit(io::verdict_to_json(v));
          return 0;
        }
        const auto acf = io::acf_from_json<T>(doc, ctx.tol);
        if (acf.dim() != 1) throw Error(ErrorKind::InvalidAcf, "solve1d needs a 1-D ACF; use recover");
        ctx.emit(io::verdict_to_json(classify_uniqueness_1d(acf, ctx.tol)));
        return 0;
      });
    }

    if (classify->parsed()) {
      const auto doc = ctx.read(input);
      return ctx.dispatch(ctx.resolve(doc, io::ScalarMode::Exact), [&](auto tag) {
        using T = typename decltype(tag)::type;
        const auto acf = io::acf_from_json<T>(doc, ctx.tol);
        const auto full = expand_full(acf, ctx.tol);
        const auto n = implied_spike_count(full.size());
        json report = detail::recover_doc(ctx, acf, attempts, directions);
        report["collisions"] = {{"deltas", full.size()},
                                {"implied_n", n ? json(*n) : json(nullptr)},
                                {"has_collisions", !n.has_value()}};
        if (acf.dim() >= 2) report["visibility"] = io::visibility_to_json(check_general_position(acf, ctx.tol));
        ctx.emit(report);
        return 0;
      });
    }

    if (recover->parsed()) {
      const auto doc = ctx.read(input);
      return ctx.dispatch(ctx.resolve(doc, io::ScalarMode::Exact), [&](auto tag) {
        using T = typename decltype(tag)::type;
        ctx.emit(detail::recover_doc(ctx, io::acf_from_json<T>(doc, ctx.tol), attempts, directions));
        return 0;
      });
    }

    if (coeffs->parsed()) {
      if (support_path == "-" && acf_path == "-") throw Error(ErrorKind::ParseError, "only one input may come from stdin");
      const auto sdoc = ctx.read(support_path);
      const auto adoc = ctx.read(acf_path);
      const auto m = ctx.mode.empty() && io::infer_mode(sdoc) == io::ScalarMode::Exact &&
                             io::infer_mode(adoc) == io::ScalarMode::Exact
                         ? io::ScalarMode::Exact
                         : ctx.resolve(json(), io::ScalarMode::Float);
      return ctx.dispatch(m, [&](auto tag) {
        using T = typename decltype(tag)::type;
        const auto support = detail::support_from_json<T>(sdoc, ctx.tol);
        const auto c = recover_coefficients(support, io::acf_from_json<T>(adoc, ctx.tol), ctx.tol);
        ctx.emit({{"scalar", io::mode_name(io::mode_of<T>())}, {"coefficients", io::vector_to_json(c)}});
        return 0;
      });
    }

    if (magnitude->parsed()) {
      ctx.emit(detail::ingest_doc(acf_from_magnitude(io::grid_from_json(ctx.read(input)), tau), err));
      return 0;
    }
    if (speckle->parsed()) {
      if (input == "-" && psd_path == "-") throw Error(ErrorKind::ParseError, "only one input may come from stdin");
      std::vector<MagnitudeGrid> frames;
      for (const auto& g : detail::unwrap_list(ctx.read(input), "frames")) frames.push_back(io::grid_from_json(g));
      const auto psd = io::grid_from_json(ctx.read(psd_path));
      ctx.emit(detail::ingest_doc(acf_from_magnitude(speckle_average(frames, psd, floor), tau), err));
      return 0;
    }
    if (channel->parsed()) {
      std::vector<std::vector<double>> samples;
      for (const auto& v : detail::unwrap_list(ctx.read(input), "samples")) samples.push_back(io::vector_from_json<double>(v));
      ctx.emit(detail::ingest_doc(acf_from_magnitude(channel_periodogram(samples), tau), err));
      return 0;
    }

    if (sweep->parsed()) {
      const auto report = turnpike_sweep(sweep_n, sweep_bound);
      json failures = json::array();
      for (const auto& c : report.disagreements) {
        failures.push_back({{"support", c.support}, {"solver_classes", c.solver_classes}, {"oracle_classes", c.oracle_classes}});
      }
      ctx.emit({{"check", "solve_turnpike == exhaustive_turnpike"},
                {"max_n", report.max_n},
                {"bound", report.bound},
                {"instances", report.instances},
                {"agreements", report.agreements},
                {"disagreements", failures},
                {"pass", report.pass()}});
      return report.pass() ? 0 : 1;
    }
  } catch (const GaveUpError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& line : e.attempt_log()) err << "  " << line << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ParseError ? 2 : 1;
  } catch (const json::exception& e) {
    err << "error: malformed document: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace sparsepr::cli
