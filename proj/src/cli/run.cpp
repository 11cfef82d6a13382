// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <omp.h>

#include <cstdlib>
#include <ostream>

#include "radiant/cli.hpp"
#include "radiant/io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace radiant::cli {

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

Overrides parse_overrides(const std::vector<std::string>& extras) {
  Overrides out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() < 3) {
      throw InputError("unexpected argument '" + arg + "'");
    }
    const std::string body = arg.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else if (i + 1 < extras.size()) {
      out.emplace_back(body, extras[++i]);
    } else {
      throw InputError("flag '" + arg + "' needs a value");
    }
  }
  return out;
}

void apply_thread_cap() {
  const char* env = std::getenv("RADIANT_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 0) throw InputError("RADIANT_THREADS must be a non-negative integer");
  if (n > 0) omp_set_num_threads(static_cast<int>(n));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"radiant: disentangled voxel radiance fields with iterative dataset editing"};
  app.name("radiant");
  app.require_subcommand(1, 1);
  app.allow_extras();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "global seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--quiet", quiet, "suppress progress output");

  std::string target;
  CLI::App* gen = app.add_subcommand("gen-data", "generate the synthetic scene datasets");
  CLI::App* train = app.add_subcommand("train", "train the object or background field");
  train->add_option("target", target, "object | background")
      ->required()
      ->check(CLI::IsMember({"object", "background"}));
  CLI::App* edit = app.add_subcommand("edit", "run iterative dataset update editing");
  CLI::App* compose = app.add_subcommand("compose", "render the composed scene");
  CLI::App* eval = app.add_subcommand("eval", "write the metrics report");
  CLI::App* pipeline = app.add_subcommand("pipeline", "run every stage in order");
  for (CLI::App* sub : {gen, train, edit, compose, eval, pipeline}) {
    sub->allow_extras();
    sub->fallthrough();
  }

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kInputError);
  }

  try {
    apply_thread_cap();
    Overrides overrides = parse_overrides(app.remaining(true));
    if (seed) overrides.emplace_back("seed", std::to_string(*seed));
    if (out_dir) overrides.emplace_back("out", nlohmann::json(*out_dir).dump());
    if (quiet) overrides.emplace_back("quiet", "true");

    std::optional<std::string> text;
    if (config_path) {
      if (!std::filesystem::exists(*config_path)) {
        throw InputError("config file not found: " + *config_path);
      }
      const auto bytes = read_file(*config_path);
      text = std::string(bytes.begin(), bytes.end());
    }

    const PipelineConfig cfg = load_config(text, overrides);

    if (gen->parsed()) cmd_gen_data(cfg, out);
    else if (train->parsed())
      cmd_train(cfg, target == "object" ? TrainTarget::kObject : TrainTarget::kBackground, out);
    else if (edit->parsed()) cmd_edit(cfg, out);
    else if (compose->parsed()) cmd_compose(cfg, out);
    else if (eval->parsed()) cmd_eval(cfg, out);
    else if (pipeline->parsed()) cmd_pipeline(cfg, out);
    return 0;
  } catch (const Error& e) {
    err << "radiant: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    err << "radiant: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kInputError);
  }
}

}  // namespace radiant::cli
