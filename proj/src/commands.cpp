#include "frameforge/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>

#include "frameforge/random.hpp"
#include "frameforge/report.hpp"

namespace frameforge {

namespace {

using Body = std::function<void(CommandResult&)>;

Json base_report(const std::string& command, const RunConfig& config, Json inputs) {
  return {{"command", command}, {"config", to_json(config)}, {"inputs", std::move(inputs)},
          {"version", toolkit_version()}};
}

void fail(CommandResult& r, int code, const std::string& kind, const std::string& message,
          const std::string& hypothesis = {}) {
  r.exit_code = code;
  r.report.erase("results");
  Json err{{"kind", kind}, {"message", message}};
  if (!hypothesis.empty()) err["hypothesis"] = hypothesis;
  r.report["error"] = err;
  r.csv.reset();
  r.svg.reset();
  r.exported.reset();
}

CommandResult guarded(const std::string& command, const RunConfig& config, Json inputs, const Body& body) {
  CommandResult r;
  r.report = base_report(command, config, std::move(inputs));
  try {
    config.validate();
    body(r);
  } catch (const DimensionCapError& e) {
    fail(r, exit_code::kDimensionCap, "dimension_cap", e.what());
  } catch (const PreconditionError& e) {
    fail(r, exit_code::kPrecondition, "precondition", e.what(), e.hypothesis());
  } catch (const SpecError& e) {
    fail(r, exit_code::kParse, "parse", e.what());
  } catch (const Json::exception& e) {
    fail(r, exit_code::kParse, "parse", e.what());
  } catch (const std::invalid_argument& e) {
    fail(r, exit_code::kParse, "argument", e.what());
  }
  return r;
}

void check_cap(const SequenceSpec& spec, std::span<const Index> ns, Index cap) {
  for (Index n : ns) {
    const Shape s = spec.shape(n);
    if (s.ambient_dim > cap) {
      throw DimensionCapError("truncation N=" + std::to_string(n) + " lives in C^" + std::to_string(s.ambient_dim) +
                              ", above the cap " + std::to_string(cap));
    }
  }
}

Json trends_of(std::span<const BoundsReport> reports, const TrendThresholds& thr) {
  if (reports.size() < 3) return nullptr;
  return {{"lower_A", to_json(growth_classify(reports, TrendField::LowerA, thr))},
          {"upper_B", to_json(growth_classify(reports, TrendField::UpperB, thr))},
          {"ratio", to_json(growth_classify(reports, TrendField::Ratio, thr))}};
}

std::string bounds_svg(const std::string& title, std::span<const BoundsReport> reports) {
  std::vector<double> ns, a, b, ratio;
  for (const BoundsReport& r : reports) {
    ns.push_back(static_cast<double>(r.trunc_index));
    a.push_back(r.lower_A);
    b.push_back(r.upper_B);
    ratio.push_back(r.ratio());
  }
  return svg_plot(title, ns, {{"A", a}, {"B", b}, {"ratio", ratio}});
}

TrendThresholds thresholds(const RunConfig& c) { return {c.trend_slope_threshold, -c.trend_slope_threshold}; }

struct Expectations {
  Json list = Json::array();
  Json diff = Json::array();

  void check(const std::string& name, bool passed, const std::string& detail) {
    list.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    if (!passed) diff.push_back({{"name", name}, {"detail", detail}});
  }

  void finish(CommandResult& r) const {
    r.report["results"]["expectations"] = list;
    if (!diff.empty()) {
      r.exit_code = exit_code::kExpectation;
      r.report["diff"] = diff;
    }
  }
};

std::string fmt(double x) { return format_number(x); }

}  // namespace

std::string toolkit_version() { return FRAMEFORGE_VERSION; }

Index effective_max_dim(const RunConfig& config) {
  const char* env = std::getenv("FRAMEFORGE_MAX_DIM");
  if (!env || !*env) return config.max_dim;
  char* end = nullptr;
  const long long v = std::strtoll(env, &end, 10);
  if (*end != '\0' || v < 1) throw SpecError(std::string("FRAMEFORGE_MAX_DIM must be a positive integer, got ") + env);
  return static_cast<Index>(v);
}

// ---------------------------------------------------------------------------

CommandResult cmd_analyze(const Json& spec_json, const RunConfig& config) {
  return guarded("analyze", config, {{"spec", spec_json}}, [&](CommandResult& r) {
    const SequenceSpec spec = spec_from_json(spec_json);
    check_cap(spec, config.ns, effective_max_dim(config));
    const std::vector<BoundsReport> reports = truncation_sweep(spec, config.ns, config.svd_cutoff);
    Json rows = Json::array();
    for (const BoundsReport& b : reports) rows.push_back(to_json(b));
    r.report["results"] = {{"reports", rows},
                           {"trends", trends_of(reports, thresholds(config))},
                           {"limit_meta", to_json(spec.limit_meta())}};
    r.csv = sweep_csv(reports).str();
    r.svg = bounds_svg(spec.name(), reports);
    const VectorSequence last = build_sequence(spec, config.ns.back());
    r.exported = to_json(SequenceSpec::explicit_vectors(last.columns(), spec.declared_meta()));
  });
}

CommandResult cmd_weigh(const Json& spec_json, const WeighOptions& opt, const RunConfig& config) {
  Json inputs{{"spec", spec_json}};
  if (opt.pair) inputs["pair"] = *opt.pair;
  return guarded("weigh", config, inputs, [&](CommandResult& r) {
    const SequenceSpec spec = spec_from_json(spec_json);
    const Index cap = effective_max_dim(config);
    check_cap(spec, config.ns, cap);
    std::optional<SequenceSpec> pair;
    if (opt.mode == WeighOptions::Mode::Dual || opt.mode == WeighOptions::Mode::Reproducing) {
      if (!opt.pair) throw SpecError("this mode needs a paired spec (--pair)");
      pair = spec_from_json(*opt.pair);
      check_cap(*pair, config.ns, cap);
    }
    auto tau_for = [](const VectorSequence& s) {
      if (s.size() > kMaxGeometricTauLength) {
        throw PreconditionError("truncation has " + std::to_string(s.size()) + " members",
                                "at most " + std::to_string(kMaxGeometricTauLength) +
                                    " members for geometric tau weights");
      }
      return default_tau(s.size());
    };

    Json results;
    Json per_n = Json::array();
    std::optional<WeightSeq> last_weights;
    switch (opt.mode) {
      case WeighOptions::Mode::Bessel: {
        results["mode"] = "bessel";
        results["B"] = opt.bound;
        std::vector<WeightedTruncation> sweep;
        for (Index n : config.ns) {
          const VectorSequence s = build_sequence(spec, n);
          const WeightCertificate c = bessel_weights(s, opt.bound, tau_for(s));
          per_n.push_back({{"N", n}, {"certificate", to_json(c)}});
          sweep.push_back({n, s, c.weights});
          last_weights = c.weights;
        }
        results["certificates"] = per_n;
        results["necessary_conditions"] = to_json(necessary_conditions_check(sweep, spec.limit_meta(), thresholds(config)));
        break;
      }
      case WeighOptions::Mode::Verdict: {
        results["mode"] = "verdict";
        const WeightedFrameVerdict v = weighted_frame_verdict(spec, config.ns, config);
        results["verdict"] = to_json(v);
        if (v.certificate) {
          last_weights = v.certificate->weights;
        } else {
          r.csv = sweep_csv(v.unweighted).str();
        }
        r.svg = bounds_svg(spec.name(), v.unweighted);
        break;
      }
      case WeighOptions::Mode::Dual: {
        results["mode"] = "dual";
        for (Index n : config.ns) {
          const VectorSequence f = build_sequence(spec, n);
          const VectorSequence g = build_sequence(*pair, n);
          const DualPairReweighting d = dual_pair_reweight(f, g, tau_for(f), config.tolerance);
          per_n.push_back({{"N", n},
                           {"lambda", to_json(d.lambda)},
                           {"beta", to_json(d.beta)},
                           {"lambda_inv_f", to_json(d.lambda_inv_f)},
                           {"lambda_g", to_json(d.lambda_g)},
                           {"beta_inv_g", to_json(d.beta_inv_g)},
                           {"beta_f", to_json(d.beta_f)},
                           {"duality_residual_lambda", d.duality_residual_lambda},
                           {"duality_residual_beta", d.duality_residual_beta}});
          last_weights = d.lambda;
        }
        results["pairs"] = per_n;
        break;
      }
      case WeighOptions::Mode::Reproducing: {
        results["mode"] = "reproducing";
        results["A"] = opt.bound;
        for (Index n : config.ns) {
          const VectorSequence f = build_sequence(spec, n);
          const VectorSequence g = build_sequence(*pair, n);
          const ReproducingPairReweighting d =
              reproducing_pair_reweight(f, g, opt.bound, tau_for(f), config.condition_cap);
          per_n.push_back({{"N", n},
                           {"lambda", to_json(d.lambda)},
                           {"beta", to_json(d.beta)},
                           {"t_condition", d.t_condition},
                           {"t_inverse_norm", d.t_inverse_norm},
                           {"lambda_inv_f", to_json(d.lambda_inv_f)},
                           {"beta_inv_g", to_json(d.beta_inv_g)},
                           {"lambda_g", to_json(d.lambda_g)},
                           {"beta_f", to_json(d.beta_f)}});
          last_weights = d.lambda;
        }
        results["pairs"] = per_n;
        break;
      }
      case WeighOptions::Mode::FiniteDomain: {
        results["mode"] = "finite_domain";
        results["domain_dim"] = opt.domain_dim;
        for (Index n : config.ns) {
          const VectorSequence s = build_sequence(spec, n);
          if (opt.domain_dim < 1 || opt.domain_dim > s.ambient_dim()) {
            throw PreconditionError("domain span(e_1..e_" + std::to_string(opt.domain_dim) + ") does not fit in C^" +
                                        std::to_string(s.ambient_dim()),
                                    "1 <= dim W <= ambient dimension");
          }
          const FiniteDomainBound b =
              finite_domain_lower_bound(s, Subspace::coordinate(s.ambient_dim(), 0, opt.domain_dim), config.svd_cutoff);
          Json witness = Json::array();
          for (Index i : b.riesz_witness) witness.push_back(i + 1);
          per_n.push_back({{"N", n},
                           {"certificate", to_json(b.certificate)},
                           {"riesz_witness", witness},
                           {"witness_lower", b.witness_lower},
                           {"direct_lower", b.direct_lower}});
        }
        results["bounds"] = per_n;
        break;
      }
    }
    r.report["results"] = results;
    if (last_weights) r.csv = weights_csv(*last_weights).str();
  });
}

// ---------------------------------------------------------------------------

CommandResult cmd_multiplier(const Json& mspec_json, MultiplierAction action, const RunConfig& config) {
  return guarded("multiplier", config, {{"multiplier", mspec_json}}, [&](CommandResult& r) {
    const MultiplierSpec spec = multiplier_from_json(mspec_json);
    const Index cap = effective_max_dim(config);
    check_cap(spec.phi, config.ns, cap);
    check_cap(spec.psi, config.ns, cap);
    Json results;
    Json rows = Json::array();
    CsvTable table;
    switch (action) {
      case MultiplierAction::Apply: {
        results["action"] = "apply";
        table.header = {"N", "operator_norm", "direct_residual"};
        for (Index n : config.ns) {
          const TruncatedMultiplier t = truncate(spec, n);
          const Matrix m = assemble(t);
          rng::Gaussian gen(rng::derive(config.seed, {static_cast<std::uint64_t>(n)}));
          Vector f(m.cols());
          for (Index i = 0; i < f.size(); ++i) f(i) = gen.complex_next();
          f /= f.norm();
          const double norm = linalg::spectral_norm(m);
          const double residual = (m * f - apply_direct(t, f)).norm();
          rows.push_back({{"N", n}, {"operator_norm", norm}, {"direct_residual", residual}});
          table.rows.push_back({std::to_string(n), fmt(norm), fmt(residual)});
        }
        results["rows"] = rows;
        break;
      }
      case MultiplierAction::Invert: {
        results["action"] = "invert";
        table.header = {"N", "invertible", "condition"};
        for (Index n : config.ns) {
          const InvertibilityVerdict v = invertibility_check(spec, n, config.svd_cutoff);
          Json j = to_json(v);
          j["N"] = n;
          rows.push_back(j);
          table.rows.push_back({std::to_string(n), v.invertible ? "1" : "0", fmt(v.condition)});
        }
        results["rows"] = rows;
        break;
      }
      case MultiplierAction::Unconditional: {
        results["action"] = "unconditional";
        UnconditionalityOptions o;
        o.trials = config.sign_trials;
        o.seed = config.seed;
        o.test_vectors = config.test_vectors;
        o.slope_threshold = config.trend_slope_threshold;
        o.log_threshold = config.log_growth_threshold;
        const UnconditionalityReport rep = unconditionality_diagnostic(spec, config.ns, o);
        results["diagnostic"] = to_json(rep);
        table.header = {"N", "vector", "L", "R", "S1"};
        for (std::size_t v = 0; v < rep.vectors.size(); ++v) {
          for (std::size_t i = 0; i < rep.ns.size(); ++i) {
            table.rows.push_back({std::to_string(rep.ns[i]), std::to_string(v + 1), fmt(rep.vectors[v].l[i]),
                                  fmt(rep.vectors[v].r[i]), fmt(rep.vectors[v].s1[i])});
          }
        }
        break;
      }
      case MultiplierAction::Shift: {
        results["action"] = "shift";
        const WeightShiftReport rep = weight_shift(spec, config.ns, thresholds(config));
        results["shift"] = to_json(rep);
        table.header = {"N", "alpha_phi_bound", "beta_psi_bound"};
        for (std::size_t i = 0; i < rep.ns.size(); ++i) {
          table.rows.push_back({std::to_string(rep.ns[i]), fmt(rep.alpha_phi_bound[i]), fmt(rep.beta_psi_bound[i])});
        }
        break;
      }
      case MultiplierAction::Interleave: {
        results["action"] = "interleave";
        table.header = {"N", "residual"};
        for (std::size_t i = 0; i < config.ns.size(); ++i) {
          const InterleaveConstruction c = interleave_identity_construction(spec, config.ns[i]);
          if (i == 0) results["construction"] = to_json(c);
          rows.push_back({{"N", c.trunc_index}, {"residual", c.residual}});
          table.rows.push_back({std::to_string(c.trunc_index), fmt(c.residual)});
        }
        results["rows"] = rows;
        break;
      }
      case MultiplierAction::Duality: {
        results["action"] = "duality";
        table.header = {"N", "stmt1", "stmt2", "stmt3", "consistent"};
        for (Index n : config.ns) {
          const TruncatedMultiplier t = truncate(spec, n);
          const DualityReport d =
              reconstruction_duality_check(t.psi, t.phi.scaled(t.symbol), config.tolerance, config.svd_cutoff);
          Json j = to_json(d);
          j["N"] = n;
          rows.push_back(j);
          table.rows.push_back({std::to_string(n), d.stmt1 ? "1" : "0", d.stmt2 ? "1" : "0", d.stmt3 ? "1" : "0",
                                d.consistent ? "1" : "0"});
        }
        results["rows"] = rows;
        break;
      }
    }
    r.report["results"] = results;
    r.csv = table.str();
  });
}

// ---------------------------------------------------------------------------

namespace {

void reproduce_one_plus_en(CommandResult& r, const RunConfig& config, bool scaled) {
  const SequenceSpec spec = scaled ? SequenceSpec::from_family(family::NTimesOnePlusEn{})
                                   : SequenceSpec::from_family(family::OnePlusEn{});
  r.report["inputs"]["spec"] = to_json(spec);
  check_cap(spec, config.ns, effective_max_dim(config));
  const WeightedFrameVerdict v = weighted_frame_verdict(spec, config.ns, config);
  Expectations ex;
  CsvTable table{{"N", "A", "B", "ratio", "complete", "excess", "defect_residual"}, {}};
  Json rows = Json::array();

  for (std::size_t i = 0; i < v.unweighted.size(); ++i) {
    const BoundsReport& b = v.unweighted[i];
    const double n = static_cast<double>(b.trunc_index);
    const double residual =
        v.biorthogonal_scan && i < v.biorthogonal_scan->residuals.size() ? v.biorthogonal_scan->residuals[i] : 0.0;
    table.rows.push_back({std::to_string(b.trunc_index), fmt(b.lower_A), fmt(b.upper_B), fmt(b.ratio()),
                          b.complete ? "1" : "0", std::to_string(b.excess), fmt(residual)});
    Json row = to_json(b);
    row["defect_residual"] = residual;
    const std::string at = " at N=" + std::to_string(b.trunc_index);
    if (!scaled) {
      ex.check("A <= 1" + at, b.lower_A <= 1.0 + 1e-9, "A=" + fmt(b.lower_A));
      ex.check("B >= N-1" + at, b.upper_B >= n - 1.0 - 1e-9, "B=" + fmt(b.upper_B));
      ex.check("ratio <= 1/(N-1)" + at, b.ratio() <= (1.0 / (n - 1.0)) * (1.0 + 1e-12), "ratio=" + fmt(b.ratio()));
    } else {
      const VectorSequence s = build_sequence(spec, b.trunc_index);
      const RealVector sv = linalg::singular_values(analysis_matrix(s).entries);
      const Index rank = linalg::numerical_rank(sv, config.svd_cutoff);
      const double span_lower = rank > 0 ? sv(rank - 1) * sv(rank - 1) : 0.0;
      double sum_sq = 0.0;
      for (Index k = 2; k <= b.trunc_index; ++k) sum_sq += static_cast<double>(k * k);
      row["span_lower"] = span_lower;
      ex.check("lower bound on the span >= 4" + at, span_lower >= 4.0 * (1.0 - 1e-9), "span_lower=" + fmt(span_lower));
      ex.check("B >= sum n^2" + at, b.upper_B >= sum_sq * (1.0 - 1e-12), "B=" + fmt(b.upper_B));
    }
    rows.push_back(row);
  }

  const TrendThresholds thr = thresholds(config);
  if (v.unweighted.size() >= 3) {
    const Trend tb = growth_classify(v.unweighted, TrendField::UpperB, thr);
    ex.check("B diverges", tb.kind == TrendKind::Diverging, "trend=" + to_string(tb.kind));
    if (!scaled) {
      const double slope = tb.slope.value_or(0.0);
      ex.check("B slope within 0.2 of 1", std::abs(slope - 1.0) <= 0.2, "slope=" + fmt(slope));
    }
  }
  ex.check("verdict ObstructionFound", v.status == VerdictStatus::ObstructionFound, "status=" + to_string(v.status));
  ex.check("biorthogonal system incomplete", v.has_reason(ReasonKind::BiorthogonalIncomplete),
           v.biorthogonal_scan ? v.biorthogonal_scan->note : "scan not run");

  r.report["results"] = {{"rows", rows}, {"verdict", to_json(v)}};
  ex.finish(r);
  r.csv = table.str();
  r.svg = bounds_svg(spec.name(), v.unweighted);
}

void reproduce_finite_domain(CommandResult& r, const RunConfig& config) {
  constexpr Index kD = 3;
  const SequenceSpec spec = SequenceSpec::from_family(family::FiniteDomainExample{kD});
  r.report["inputs"]["spec"] = to_json(spec);
  check_cap(spec, config.ns, effective_max_dim(config));
  const std::vector<BoundsReport> reports = truncation_sweep(spec, config.ns, config.svd_cutoff);
  Expectations ex;
  CsvTable table{{"N", "A", "B", "ratio", "complete", "excess", "domain_A"}, {}};
  Json rows = Json::array();
  for (const BoundsReport& b : reports) {
    const VectorSequence s = build_sequence(spec, b.trunc_index);
    const FiniteDomainBound fd =
        finite_domain_lower_bound(s, Subspace::coordinate(s.ambient_dim(), 0, kD), config.svd_cutoff);
    const double a = fd.certificate.claim.lower;
    Json row = to_json(b);
    row["domain_A"] = a;
    row["domain_direct_A"] = fd.direct_lower;
    rows.push_back(row);
    table.rows.push_back({std::to_string(b.trunc_index), fmt(b.lower_A), fmt(b.upper_B), fmt(b.ratio()),
                          b.complete ? "1" : "0", std::to_string(b.excess), fmt(a)});
    ex.check("domain lower bound = 1 at N=" + std::to_string(b.trunc_index), std::abs(a - 1.0) <= 1e-9,
             "A=" + fmt(a));
  }
  r.report["results"] = {{"rows", rows}, {"domain_dim", kD}};
  ex.finish(r);
  r.csv = table.str();
  r.svg = bounds_svg(spec.name(), reports);
}

void reproduce_interleave(CommandResult& r, const RunConfig& config) {
  const auto gaussian = [&](std::uint64_t salt) {
    return SequenceSpec::from_family(family::RandomGaussian{rng::derive(config.seed, {salt}), {1, 0}, {1, 0}});
  };
  const MultiplierSpec random{ScalarRule::random_bounded(rng::derive(config.seed, {1}), 1.0), gaussian(2), gaussian(3)};
  const MultiplierSpec half{ScalarRule::constant(0.5), SequenceSpec::from_family(family::OrthonormalBasis{}),
                            SequenceSpec::from_family(family::OrthonormalBasis{})};
  r.report["inputs"]["multipliers"] = {to_json(random), to_json(half)};
  const Index cap = effective_max_dim(config);
  check_cap(random.phi, config.ns, cap);
  check_cap(half.phi, config.ns, cap);

  Expectations ex;
  CsvTable table{{"N", "residual", "residual_half"}, {}};
  Json rows = Json::array();
  for (Index n : config.ns) {
    const InterleaveConstruction c = interleave_identity_construction(random, n);
    const InterleaveConstruction h = interleave_identity_construction(half, n);
    rows.push_back({{"N", n}, {"residual", c.residual}, {"residual_half", h.residual}});
    table.rows.push_back({std::to_string(n), fmt(c.residual), fmt(h.residual)});
    const std::string at = " at N=" + std::to_string(n);
    ex.check("random multiplier residual <= 1e-10" + at, c.residual <= 1e-10, "residual=" + fmt(c.residual));
    ex.check("half-identity residual <= 1e-10" + at, h.residual <= 1e-10, "residual=" + fmt(h.residual));
  }
  r.report["results"] = {{"rows", rows}};
  ex.finish(r);
  r.csv = table.str();
}

}  // namespace

CommandResult cmd_reproduce(const std::string& preset, const RunConfig& config) {
  return guarded("reproduce", config, {{"preset", preset}}, [&](CommandResult& r) {
    if (preset == "e1-plus-en") {
      reproduce_one_plus_en(r, config, false);
    } else if (preset == "n-e1-plus-en") {
      reproduce_one_plus_en(r, config, true);
    } else if (preset == "finite-domain") {
      reproduce_finite_domain(r, config);
    } else if (preset == "interleave-identity") {
      reproduce_interleave(r, config);
    } else {
      throw SpecError("unknown preset \"" + preset + "\"");
    }
  });
}

}  // namespace frameforge
