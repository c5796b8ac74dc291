#include <chrono>
#include <fstream>
#include <sstream>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cantorsum/baselines.hpp"
#include "cantorsum/configuration.hpp"
#include "cantorsum/io.hpp"
#include "cantorsum/pipeline.hpp"

namespace fs = std::filesystem;
using namespace cantorsum;
using nlohmann::json;

namespace {

Rational parse_param(const std::string& s, const std::string& what) {
  // accept "p/q", integers, and plain decimals like 0.35
  if (auto q = parse_rational(s)) return *q;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::string den = "1" + std::string(s.size() - dot - 1, '0');
    if (auto q = parse_rational(digits + "/" + den)) return *q;
  }
  throw CLI::ValidationError(what, "expected a rational like 3/10 or 0.3");
}

std::string timestamp_header() {
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return std::string("# generated: ") + buf + "\n";
}

void write_manifest(const fs::path& out, const json& params,
                    const std::vector<std::string>& files) {
  json m;
  m["parameters"] = params;
  m["files"] = files;
  write_text_file((out / "manifest.json").string(), m.dump(2) + "\n");
}

int exit_code_for(PipelineStage stage) {
  switch (stage) {
    case PipelineStage::Done: return 0;
    case PipelineStage::Inputs: return 2;
    case PipelineStage::CommonRatio: return 3;
    case PipelineStage::Refine: return 4;
    case PipelineStage::Classify: return 5;
    case PipelineStage::Partitions: return 6;
    case PipelineStage::BuildL0: return 7;
    case PipelineStage::BuildE: return 8;
    case PipelineStage::DeltaNet: return 9;
    case PipelineStage::Search: return 10;
    case PipelineStage::Verify: return 11;
    case PipelineStage::Replay: return 12;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cantorsum: interval certificates for differences of homogeneous Cantor sets"};
  app.require_subcommand(1);

  // classify
  std::string arg_a, arg_b;
  auto* classify = app.add_subcommand("classify", "regime of C_a + C_b");
  classify->add_option("a", arg_a, "first parameter in (0, 1/2)")->required();
  classify->add_option("b", arg_b, "second parameter in (0, 1/2)")->required();
  std::string classify_out;
  classify->add_option("--out", classify_out, "output directory");

  // pipeline
  std::string cfg1, cfg2, mode_str = "cross", out_dir = "out";
  std::string c0_str = "5", c2_str = "1";
  int refine_level = 1;
  long trials = 200;
  std::uint64_t seed = 0;
  bool full_stats = false;
  auto* pipe = app.add_subcommand("pipeline", "run the full perturbation pipeline");
  pipe->add_option("--config", cfg1, "IFS config for K")->required();
  pipe->add_option("--config2", cfg2, "IFS config for K' (default: copy of K)");
  pipe->add_option("--mode", mode_str, "cross | self")
      ->check(CLI::IsMember({"cross", "self"}));
  pipe->add_option("--seed", seed, "RNG seed (mandatory)")->required();
  pipe->add_option("--trials", trials, "perturbation draws before giving up");
  pipe->add_option("--c0", c0_str, "perturbation amplitude constant");
  pipe->add_option("--c2", c2_str, "good-pair / return-count constant");
  pipe->add_option("--refine", refine_level, "refinement level applied to inputs");
  pipe->add_option("--out", out_dir, "output directory");
  pipe->add_flag("--full-stats", full_stats, "record failures past the first miss");

  // oracle
  std::string ocfg1, ocfg2, omode = "difference", oout;
  int odepth = 4;
  auto* oracle = app.add_subcommand("oracle", "finite-depth sumset cover");
  oracle->add_option("--config", ocfg1, "IFS config for K")->required();
  oracle->add_option("--config2", ocfg2, "IFS config for K' (default: copy of K)");
  oracle->add_option("--depth", odepth, "cover depth");
  oracle->add_option("--mode", omode, "sum | difference")
      ->check(CLI::IsMember({"sum", "difference"}));
  oracle->add_option("--out", oout, "output directory");

  // region-grid
  int resolution = 8, gdepth = 6;
  std::string gout;
  auto* grid = app.add_subcommand("region-grid", "regime verdicts over the (a,b) grid");
  grid->add_option("--resolution", resolution, "grid resolution (>= 2)");
  grid->add_option("--depth", gdepth, "sum-cover depth for gap counts");
  grid->add_option("--out", gout, "output directory");

  // replay
  std::string cert_path, replay_cfg1, replay_cfg2;
  auto* rep = app.add_subcommand("replay", "re-verify a certificate file");
  rep->add_option("--cert", cert_path, "certificate file")->required();
  rep->add_option("--config", replay_cfg1, "base IFS config to cross-check");
  rep->add_option("--config2", replay_cfg2, "base K' config to cross-check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*classify) {
      Rational a = parse_param(arg_a, "a"), b = parse_param(arg_b, "b");
      RegimeVerdict v = classify_region(a, b);
      json j;
      j["a"] = to_string(a);
      j["b"] = to_string(b);
      j["verdict"] = to_string(v.verdict);
      j["dimension_sum"] = v.dimension_sum;
      j["dim_sum_below_1"] = v.dim_sum_below_1;
      j["dim_sum_equals_1"] = v.dim_sum_equals_1;
      j["thickness_product"] = to_string(v.thickness_product);
      std::cout << "C_" << to_string(a) << " + C_" << to_string(b) << ": "
                << to_string(v.verdict) << " (dimension sum " << v.dimension_sum
                << ", thickness product " << to_string(v.thickness_product)
                << " = " << to_decimal(v.thickness_product, 6) << ")\n";
      if (!classify_out.empty()) {
        fs::create_directories(classify_out);
        write_text_file((fs::path(classify_out) / "classify.json").string(),
                        j.dump(2) + "\n");
        write_manifest(classify_out, j, {"classify.json"});
      }
      return 0;
    }

    if (*pipe) {
      PipelineParams params;
      params.K = load_ifs_file(cfg1);
      if (!cfg2.empty()) params.Kp = load_ifs_file(cfg2);
      params.mode = mode_str == "self" ? Mode::Self : Mode::Cross;
      params.c0 = parse_param(c0_str, "c0");
      params.c2 = parse_param(c2_str, "c2");
      params.refine_level = refine_level;
      params.trials = trials;
      params.seed = seed;
      params.full_scan_stats = full_stats;

      PipelineResult result = run_pipeline(params);

      fs::create_directories(out_dir);
      fs::path out(out_dir);
      std::vector<std::string> files{"report.txt", "stats.json"};
      write_text_file((out / "report.txt").string(),
                      timestamp_header() + result.report);
      write_text_file((out / "stats.json").string(), stats_json(result));
      if (result.certificate) {
        write_text_file((out / "certificate.json").string(),
                        serialize_certificate(*result.certificate));
        files.push_back("certificate.json");
      }
      json params_json;
      params_json["config"] = cfg1;
      if (!cfg2.empty()) params_json["config2"] = cfg2;
      params_json["mode"] = mode_str;
      params_json["seed"] = seed;
      params_json["trials"] = trials;
      params_json["c0"] = to_string(params.c0);
      params_json["c2"] = to_string(params.c2);
      params_json["refine"] = refine_level;
      write_manifest(out, params_json, files);

      std::cout << result.report;
      if (!result.ok()) {
        std::cerr << "pipeline failed at stage " << to_string(result.failed_stage)
                  << ": " << result.error << "\n";
        return exit_code_for(result.failed_stage);
      }
      return 0;
    }

    if (*oracle) {
      HomogeneousIFS K = load_ifs_file(ocfg1);
      HomogeneousIFS Kp = ocfg2.empty() ? K : load_ifs_file(ocfg2);
      SumMode m = omode == "sum" ? SumMode::Sum : SumMode::Difference;
      IntervalUnion u = brute_sumset(K, Kp, odepth, m);
      std::string text = serialize_interval_union(u);
      std::cout << "depth-" << odepth << " " << omode << " cover: "
                << u.component_count() << " component(s), measure "
                << to_string(u.measure()) << "\n";
      if (!oout.empty()) {
        fs::create_directories(oout);
        write_text_file((fs::path(oout) / "cover.json").string(), text);
        json pj;
        pj["depth"] = odepth;
        pj["mode"] = omode;
        write_manifest(oout, pj, {"cover.json"});
      }
      return 0;
    }

    if (*grid) {
      std::string csv = region_grid_csv(resolution, gdepth);
      if (!gout.empty()) {
        fs::create_directories(gout);
        write_text_file((fs::path(gout) / "region_grid.csv").string(), csv);
        json pj;
        pj["resolution"] = resolution;
        pj["depth"] = gdepth;
        write_manifest(gout, pj, {"region_grid.csv"});
      } else {
        std::cout << csv;
      }
      return 0;
    }

    if (*rep) {
      std::ifstream in(cert_path);
      if (!in) {
        std::cerr << "cannot open certificate: " << cert_path << "\n";
        return 2;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      Certificate cert = parse_certificate(ss.str());
      if (!replay_cfg1.empty() && !(load_ifs_file(replay_cfg1) == cert.base_K)) {
        std::cerr << "replay: base K does not match --config\n";
        return 2;
      }
      if (!replay_cfg2.empty() && !(load_ifs_file(replay_cfg2) == cert.base_Kp)) {
        std::cerr << "replay: base K' does not match --config2\n";
        return 2;
      }
      ReplayResult rr = replay(cert);
      std::cout << (rr.pass ? "replay: pass" : "replay: FAIL") << "\n";
      if (!rr.detail.empty()) std::cout << rr.detail << "\n";
      return rr.pass ? 0 : 12;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
