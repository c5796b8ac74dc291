#include "cantorsum/pipeline.hpp"

#include <sstream>

#include <json.hpp>

#include "cantorsum/configuration.hpp"
#include "cantorsum/io.hpp"

namespace cantorsum {

std::string to_string(PipelineStage s) {
  switch (s) {
    case PipelineStage::Inputs: return "inputs";
    case PipelineStage::CommonRatio: return "common_ratio";
    case PipelineStage::Refine: return "refine";
    case PipelineStage::Classify: return "classify_pairs";
    case PipelineStage::Partitions: return "select_partitions";
    case PipelineStage::BuildL0: return "build_L0";
    case PipelineStage::BuildE: return "build_E";
    case PipelineStage::DeltaNet: return "delta_net";
    case PipelineStage::Search: return "search_omega";
    case PipelineStage::Verify: return "verify_recurrent";
    case PipelineStage::Replay: return "replay";
    case PipelineStage::Done: return "done";
  }
  return "?";
}

namespace {

std::string render_union(const IntervalUnion& u, int max_parts = 4) {
  std::ostringstream os;
  os << "measure " << to_string(u.measure()) << " (" << to_decimal(u.measure(), 6)
     << "), " << u.component_count() << " component(s)";
  int shown = 0;
  for (const auto& iv : u.parts()) {
    if (shown++ >= max_parts) {
      os << " ...";
      break;
    }
    os << " [" << to_string(iv.lo) << ", " << to_string(iv.hi) << "]";
  }
  return os.str();
}

}  // namespace

PipelineResult run_pipeline(const PipelineParams& params) {
  PipelineResult res;
  std::ostringstream rep;

  auto fail = [&](PipelineStage stage, std::string what) {
    res.failed_stage = stage;
    res.error = std::move(what);
    rep << "FAILED at stage " << to_string(stage) << ": " << res.error << "\n";
    res.report = rep.str();
    return res;
  };

  HomogeneousIFS K = params.K;
  HomogeneousIFS Kp = params.Kp ? *params.Kp : params.K;
  if (params.mode == Mode::Self && params.Kp && !(*params.Kp == params.K))
    return fail(PipelineStage::Inputs, "self mode requires a single set");
  if (auto v = validate(K); !v.ok())
    return fail(PipelineStage::Inputs, "K invalid: " + v.violations.front().what);
  if (auto v = validate(Kp); !v.ok())
    return fail(PipelineStage::Inputs, "K' invalid: " + v.violations.front().what);
  try {
    ConstantsConfig{params.c0, params.c2}.check(s0_of(K, Kp));
  } catch (const std::exception& e) {
    return fail(PipelineStage::Inputs, e.what());
  }

  if (K.ratio != Kp.ratio) {
    auto shared = common_ratio(K, Kp, params.ratio_cap);
    if (!shared)
      return fail(PipelineStage::CommonRatio,
                  "ratios are incommensurable within exponent cap " +
                      std::to_string(params.ratio_cap));
    K = shared->first;
    Kp = shared->second;
  }
  if (params.refine_level > 1) {
    try {
      K = refine(K, params.refine_level);
      Kp = refine(Kp, params.refine_level);
    } catch (const std::exception& e) {
      return fail(PipelineStage::Refine, e.what());
    }
  }

  rep << "mode: " << (params.mode == Mode::Cross ? "cross" : "self") << "\n";
  rep << "presentation: |A|=" << K.size() << " |A'|=" << Kp.size() << " ratio "
      << to_string(K.ratio) << " (rho = " << to_string(K.ratio * K.ratio)
      << ")\n";
  rep << "constants: c0 = " << to_string(params.c0)
      << ", c2 = " << to_string(params.c2) << "\n";

  GoodPairTable table;
  try {
    table = classify_pairs(K, Kp, params.c2);
  } catch (const std::exception& e) {
    return fail(PipelineStage::Classify, e.what());
  }
  res.table = table;
  rep << "good pairs: |G| = " << table.good_count << " of |B| = " << table.total
      << " (threshold " << to_string(table.threshold) << ")\n";

  std::vector<int> A1, A2;
  if (params.mode == Mode::Cross) {
    PartitionError perr;
    auto choice = select_partitions(table, K, &perr);
    if (!choice)
      return fail(PipelineStage::Partitions,
                  perr.what + " (best fractions " +
                      to_decimal(perr.best_fraction_1, 4) + ", " +
                      to_decimal(perr.best_fraction_2, 4) + ")");
    A1 = choice->A1;
    A2 = choice->A2;
    rep << "partitions: |A1| = " << A1.size() << ", |A2| = " << A2.size()
        << ", |G1| = " << choice->G1 << ", |G2| = " << choice->G2 << "\n";
  } else {
    std::string serr;
    auto choice = select_partitions_selfsum(table, K, &serr);
    if (!choice) return fail(PipelineStage::Partitions, serr);
    A1 = choice->A1;
    A2 = choice->A2;
    rep << "partitions (self): |A1| = " << A1.size() << ", |A2| = " << A2.size()
        << ", |G^(lm)| = {" << choice->Glm[0] << ", " << choice->Glm[1] << ", "
        << choice->Glm[2] << ", " << choice->Glm[3] << "}\n";
  }

  RecurrentCandidate cand;
  try {
    cand = build_L0(K, Kp, A1, A2, params.c2, params.mode);
  } catch (const std::exception& e) {
    return fail(PipelineStage::BuildL0, e.what());
  }
  res.candidate = cand;
  rep << "N = " << cand.N << "\n";
  rep << "L0: " << render_union(cand.L0) << "\n";
  rep << "L1: " << render_union(cand.L1) << "\n";
  rep << "L:  " << render_union(cand.L) << "\n";
  rep << "effective c3 (measured |L0|): " << to_string(cand.L0.measure()) << "\n";
  if (cand.L0.empty()) {
    res.empty_construction = true;
    std::string why = cand.N_exceeds_A1
                          ? "N = " + std::to_string(cand.N) + " exceeds |A1| = " +
                                std::to_string(A1.size())
                          : "no point is covered by N independent returns";
    return fail(PipelineStage::BuildL0, "construction empty: " + why);
  }

  if (params.mode == Mode::Cross) {
    try {
      EReport er = build_E(K, Kp, A1, A2, params.c2);
      res.e_report = er;
      rep << "E: " << render_union(er.E) << "\n";
      rep << "integral phi0 = " << to_string(er.integral_phi0)
          << ", E-threshold = " << to_string(er.threshold) << "\n";
    } catch (const std::exception& e) {
      return fail(PipelineStage::BuildE, e.what());
    }
  }

  std::vector<Rational> net = delta_net(cand);
  res.net_size = net.size();
  Rational net_cap = 2 * (1 + cand.s0) / pow_rat(K.ratio, 5);
  rep << "net: #Delta = " << net.size() << " (cap " << to_string(net_cap)
      << " = " << to_decimal(net_cap, 2) << ")\n";

  SearchOptions sopts;
  sopts.full_scan = params.full_scan_stats;
  sopts.workers = params.workers;
  SearchResult sr = search_omega(cand, params.trials, params.seed, params.c0, sopts);
  res.search = sr;
  rep << "search: " << sr.stats.draws_attempted << " draw(s), "
      << sr.stats.invalid_draws << " invalid";
  if (sr.stats.misconfigured)
    rep << " [misconfigured: invalid rate above 1/2, c0 too large for this rho]";
  rep << "\n";
  if (!sr.omega0)
    return fail(PipelineStage::Search,
                "exhausted " + std::to_string(params.trials) +
                    " trials without covering the net");
  rep << "omega0: draw " << sr.omega0->draw_index << " of seed "
      << sr.omega0->seed << "\n";

  auto verdict = verify_recurrent(cand, *sr.omega0, params.c0);
  if (std::holds_alternative<VerifyFailure>(verdict)) {
    const auto& vf = std::get<VerifyFailure>(verdict);
    std::string what = vf.what;
    if (vf.failing_point) what += " at t0 = " + to_string(*vf.failing_point);
    return fail(PipelineStage::Verify, what);
  }
  res.certificate = std::get<Certificate>(verdict);
  const Certificate& cert = *res.certificate;

  res.closeness_value = closeness(K, cert.perturbed_K);
  if (res.closeness_value) {
    rep << "closeness(K, K^omega): " << to_string(*res.closeness_value)
        << " <= c0 * rho^(1/2) = " << to_string(params.c0 * K.ratio) << "\n";
  }
  if (cert.vacuous) {
    rep << "certificate: vacuous (empty L), no interval certified\n";
  } else if (cert.J) {
    rep << "certified interval J = [" << to_string(cert.J->lo) << ", "
        << to_string(cert.J->hi) << "] (length " << to_string(cert.J->length())
        << " = " << to_decimal(cert.J->length(), 6) << ")\n";
    rep << "cover intervals: " << cert.cover.size() << ", margin slack rho/2 - rho^(3/2) = "
        << to_string(cand.rho / 2 - pow_rat(K.ratio, 3)) << "\n";
  }

  ReplayResult rr = replay(cert);
  res.replay_result = rr;
  rep << "replay: " << (rr.pass ? "pass" : "FAIL: " + rr.detail) << "\n";
  if (!rr.pass) return fail(PipelineStage::Replay, rr.detail);

  res.report = rep.str();
  return res;
}

std::string stats_json(const PipelineResult& result) {
  nlohmann::json j;
  j["net_size"] = result.net_size;
  if (result.search) {
    const auto& s = result.search->stats;
    j["draws_attempted"] = s.draws_attempted;
    j["invalid_draws"] = s.invalid_draws;
    j["misconfigured"] = s.misconfigured;
    j["full_scan"] = s.full_scan;
    if (result.search->omega0)
      j["accepted_draw"] = result.search->omega0->draw_index;
    j["point_attempts"] = s.point_attempts;
    j["point_failures"] = s.point_failures;
  }
  if (result.candidate) {
    j["L0_measure"] = to_string(result.candidate->L0.measure());
    j["N"] = result.candidate->N;
  }
  if (result.e_report) {
    j["E_measure"] = to_string(result.e_report->E.measure());
    j["integral_phi0"] = to_string(result.e_report->integral_phi0);
  }
  if (result.table) {
    j["good_pairs"] = result.table->good_count;
    j["total_pairs"] = result.table->total;
  }
  return j.dump(2) + "\n";
}

}  // namespace cantorsum
