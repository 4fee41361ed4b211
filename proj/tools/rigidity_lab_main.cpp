// rigidity-lab CLI: thin shell over the shared-library C API. Subcommands
// assemble a v1 config object and hand it to rl_run.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "rigidity_lab.h"

// Rendering lives in the core; redeclared here through the dispatch report.
namespace rigidity {
std::string render_report(const nlohmann::json& report);
}

namespace {

using nlohmann::json;

int emit(rl_status status, char* report_cstr, const std::string& out_path, bool render) {
  std::string report = report_cstr ? report_cstr : "{}";
  rl_string_free(report_cstr);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << report << "\n";
    std::cout << rigidity::render_report(json::parse(report));
  } else if (render) {
    std::cout << rigidity::render_report(json::parse(report));
  } else {
    std::cout << report << "\n";
  }
  return int(status);
}

struct CommonOpts {
  std::string out_path;
  bool render = false;
};

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--out", common.out_path, "write the JSON report to this file");
  cmd->add_flag("--render", common.render, "print a human-readable table instead of JSON");
}

int run_config(const json& config, const CommonOpts& common) {
  char* report = nullptr;
  rl_status status = rl_run(config.dump().c_str(), &report);
  return emit(status, report, common.out_path, common.render);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigidity-lab: hyperbolicity, resonance, semiconjugacy, cone and "
               "lifting-obstruction computations"};
  app.require_subcommand(1);

  json config;
  CommonOpts common;

  // hyperbolic / splitting / regularity share matrix+tol options.
  for (const char* name : {"hyperbolic", "splitting", "regularity"}) {
    auto* cmd = app.add_subcommand(name, std::string(name) + " analysis of an integer matrix");
    auto matrix = std::make_shared<std::string>();
    auto tol = std::make_shared<double>(1e-9);
    auto margin = std::make_shared<double>(-1.0);
    cmd->add_option("--matrix", *matrix, "matrix JSON file")->required();
    cmd->add_option("--tol", *tol, "unit-circle separation tolerance");
    if (std::string(name) == "splitting")
      cmd->add_option("--margin", *margin, "also emit the adapted norm with this margin");
    add_common(cmd, common);
    cmd->callback([&, name, matrix, tol, margin] {
      config = json{{"command", name}, {"matrix_path", *matrix}, {"tol", *tol}};
      if (*margin >= 0.0) config["margin"] = *margin;
    });
  }

  {
    auto* cmd = app.add_subcommand("rank1", "rank-one factor test on log-weight vectors");
    auto path = std::make_shared<std::string>();
    cmd->add_option("--vectors", *path, "JSON file with {\"vectors\": [[...]]}")->required();
    add_common(cmd, common);
    cmd->callback([&, path] { config = json{{"command", "rank1"}, {"vectors_path", *path}}; });
  }

  {
    auto* cmd = app.add_subcommand("nonres", "resonance classification of a weight set");
    auto family = std::make_shared<std::string>();
    auto rank = std::make_shared<int>(0);
    auto hw = std::make_shared<std::string>();
    auto weights = std::make_shared<std::string>();
    cmd->add_option("--family", *family, "A,B,C,D,BC,E6,E7,E8,F4,G2")->required();
    cmd->add_option("--rank", *rank, "rank")->required();
    cmd->add_option("--highest-weight", *hw, "fundamental-weight coefficients, e.g. 1,0");
    cmd->add_option("--weights", *weights, "JSON file with explicit weight vectors");
    add_common(cmd, common);
    cmd->callback([&, family, rank, hw, weights] {
      config = json{{"command", "nonres"}, {"family", *family}, {"rank", *rank}};
      if (!hw->empty()) config["highest_weight"] = *hw;
      if (!weights->empty()) config["weights_path"] = *weights;
    });
  }

  {
    auto* cmd = app.add_subcommand("gcd-rows", "Cartan matrix row gcds");
    auto family = std::make_shared<std::string>();
    auto rank = std::make_shared<int>(0);
    cmd->add_option("--family", *family)->required();
    cmd->add_option("--rank", *rank)->required();
    add_common(cmd, common);
    cmd->callback([&, family, rank] {
      config = json{{"command", "gcd-rows"}, {"family", *family}, {"rank", *rank}};
    });
  }

  {
    auto* cmd = app.add_subcommand("nilpotent", "central tower and layer hyperbolicity");
    auto algebra = std::make_shared<std::string>();
    auto autom = std::make_shared<std::string>();
    cmd->add_option("--algebra", *algebra, "algebra JSON file")->required();
    cmd->add_option("--automorphism", *autom, "matrix JSON file to validate and descend");
    add_common(cmd, common);
    cmd->callback([&, algebra, autom] {
      config = json{{"command", "nilpotent"}, {"algebra_path", *algebra}};
      if (!autom->empty()) config["automorphism_path"] = *autom;
    });
  }

  {
    auto* cmd = app.add_subcommand("semiconj", "Franks-Manning correction series solver");
    auto matrix = std::make_shared<std::string>();
    auto field = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto tol = std::make_shared<double>(1e-8);
    auto max_terms = std::make_shared<int>(512);
    cmd->add_option("--matrix", *matrix, "linear data A (JSON)")->required();
    cmd->add_option("--field", *field, "periodic field u (JSON: grid values or modes)")
        ->required();
    cmd->add_option("--tol", *tol, "residual tolerance");
    cmd->add_option("--max-terms", *max_terms, "series term budget");
    cmd->add_option("--out", *out, "write the solved corrector w to this file");
    cmd->add_flag("--render", common.render, "print a human-readable table instead of JSON");
    cmd->callback([&, matrix, field, out, tol, max_terms] {
      config = json{{"command", "semiconj"},
                    {"matrix_path", *matrix},
                    {"field_path", *field},
                    {"tol", *tol},
                    {"max_terms", *max_terms}};
      if (!out->empty()) config["out"] = *out;
    });
  }

  {
    auto* cmd = app.add_subcommand("cone-cert", "Anosov power certificate for f^N g f^N");
    auto f = std::make_shared<std::string>();
    auto g = std::make_shared<std::string>();
    auto eps = std::make_shared<double>(1.0);
    auto margin = std::make_shared<double>(0.0);
    auto delta0 = std::make_shared<double>(-1.0);
    auto verify = std::make_shared<bool>(false);
    auto samples = std::make_shared<int>(10000);
    auto seed = std::make_shared<std::uint64_t>(0);
    cmd->add_option("--f", *f, "reference Anosov matrix (JSON)")->required();
    cmd->add_option("--g", *g, "perturbing map: matrix or {jacobians:[...]} (JSON)")->required();
    cmd->add_option("--eps", *eps, "cone aperture in (0,1]");
    cmd->add_option("--margin", *margin, "adapted-norm margin");
    cmd->add_option("--delta0", *delta0, "override delta0 (default r/(2C))");
    cmd->add_flag("--verify", *verify, "run the sampled cone check on f^N g f^N");
    cmd->add_option("--samples", *samples, "cone-check sample count");
    cmd->add_option("--seed", *seed, "cone-check RNG seed");
    add_common(cmd, common);
    cmd->callback([&, f, g, eps, margin, delta0, verify, samples, seed] {
      config = json{{"command", "cone-cert"}, {"f_path", *f},     {"g_path", *g},
                    {"eps", *eps},            {"margin", *margin}, {"verify", *verify},
                    {"samples", *samples},    {"seed", *seed}};
      if (*delta0 > 0.0) config["delta0"] = *delta0;
    });
  }

  {
    auto* cmd = app.add_subcommand("lift", "twisted lifting-obstruction solver");
    auto pres = std::make_shared<std::string>();
    auto rho = std::make_shared<std::string>();
    auto defects = std::make_shared<std::string>();
    cmd->add_option("--presentation", *pres, "presentation JSON file")->required();
    cmd->add_option("--rho", *rho, "generator matrices JSON file")->required();
    cmd->add_option("--defects", *defects, "relator defect vectors JSON file")->required();
    add_common(cmd, common);
    cmd->callback([&, pres, rho, defects] {
      config = json{{"command", "lift"},
                    {"presentation_path", *pres},
                    {"rho_path", *rho},
                    {"defects_path", *defects}};
    });
  }

  CLI11_PARSE(app, argc, argv);
  return run_config(config, common);
}
