#pragma once

// Command-line front end. cli_main returns 0 on success, 1 when validation
// finds problems and 2 on usage, I/O or parse errors.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phav/cooltsn.hpp"
#include "phav/default_library.hpp"
#include "phav/generator.hpp"
#include "phav/kite_camera.hpp"
#include "phav/params.hpp"

namespace phav {

namespace cli_detail {

struct Inputs {
  std::string config;
  std::string library;
};

inline MotionLibrary library_for(const Inputs& in) {
  return in.library.empty() ? default_library() : load_library(in.library);
}

inline GeneratorParams params_for(const Inputs& in, const MotionLibrary& lib) {
  return in.config.empty() ? default_params(lib.specs()) : load_params(in.config);
}

inline std::string csv_row(std::initializer_list<double> values) {
  std::string s;
  bool first = true;
  for (double v : values) {
    if (!first) s += ',';
    first = false;
    detail::append_fixed(s, v);
  }
  return s;
}

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Procedural human-action scenario generator"};
  app.require_subcommand(1);

  cli_detail::Inputs in;
  auto add_inputs = [&in](CLI::App* sub) {
    sub->add_option("--config", in.config, "generator parameters (JSON); defaults when omitted");
    sub->add_option("--library", in.library, "motion library (JSON); bundled library when omitted");
  };

  // generate
  auto* gen = app.add_subcommand("generate", "generate a dataset manifest and tracks");
  add_inputs(gen);
  std::optional<std::size_t> per_category, total;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned jobs = 1;
  bool no_tracks = false;
  auto* per_opt = gen->add_option("--per-category", per_category, "videos per action category");
  auto* total_opt = gen->add_option("--total", total, "total videos, actions sampled");
  per_opt->excludes(total_opt);
  gen->add_option("--seed", seed, "master seed")->required();
  gen->add_option("--out", out_dir, "output directory")->required();
  gen->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  gen->add_flag("--no-tracks", no_tracks, "write the manifest only");

  // stats
  auto* stats = app.add_subcommand("stats", "dataset statistics as JSON");
  std::string manifest;
  stats->add_option("--manifest", manifest, "manifest.jsonl")->required();

  // splits
  auto* splits = app.add_subcommand("splits", "stratified train/test splits");
  std::string splits_out;
  double ratio = 0.8;
  std::size_t split_count = 3;
  std::uint64_t split_seed = 0;
  splits->add_option("--manifest", manifest, "manifest.jsonl")->required();
  splits->add_option("--out", splits_out, "output directory; the manifest's directory when omitted");
  splits->add_option("--ratio", ratio, "training fraction per category");
  splits->add_option("--count", split_count, "number of splits")->check(CLI::PositiveNumber);
  splits->add_option("--seed", split_seed, "split seed");

  // camera-sim
  auto* cam = app.add_subcommand("camera-sim", "simulate the camera rig around a stationary protagonist");
  std::string rig_path;
  double fps = 30.0, duration = 10.0;
  std::vector<double> impulse;
  cam->add_option("--rig", rig_path, "rig parameters (JSON); default rig when omitted");
  cam->add_option("--fps", fps, "frame rate")->check(CLI::PositiveNumber);
  cam->add_option("--duration", duration, "seconds")->check(CLI::NonNegativeNumber);
  cam->add_option("--impulse", impulse, "initial camera impulse x y z (N s)")->expected(3);

  // validate
  auto* val = app.add_subcommand("validate", "check a configuration (and optionally a manifest)");
  add_inputs(val);
  std::string val_manifest;
  val->add_option("--manifest", val_manifest, "re-check records against the configuration");

  // loss-check
  auto* loss = app.add_subcommand("loss-check", "multi-task loss with a finite-difference gradient check");
  std::string loss_input;
  double fd_step = 1e-5, fd_tol = 1e-5;
  loss->add_option("--input", loss_input, "problem JSON")->required();
  loss->add_option("--step", fd_step, "finite-difference step")->check(CLI::PositiveNumber);
  loss->add_option("--tolerance", fd_tol, "maximum accepted relative error");

  // export
  auto* exp_cfg = app.add_subcommand("export-config", "write the default configuration");
  auto* exp_lib = app.add_subcommand("export-library", "write the bundled motion library");
  std::string export_path;
  exp_cfg->add_option("--out", export_path, "output file")->required();
  exp_lib->add_option("--out", export_path, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (gen->parsed()) {
      if (!per_category && !total) {
        err << "error: give --per-category or --total\n";
        return 2;
      }
      const auto lib = cli_detail::library_for(in);
      const auto params = cli_detail::params_for(in, lib);
      const auto findings = validate_params(params, lib);
      if (!findings.empty()) {
        for (const auto& f : findings) err << "invalid config: " << f.message << "\n";
        return 1;
      }
      GenerateOptions opt;
      opt.per_category = per_category;
      opt.total = total;
      opt.seed = seed;
      opt.out_dir = out_dir;
      opt.jobs = jobs;
      opt.write_tracks = !no_tracks;
      const auto records = generate_dataset(params, lib, opt);
      out << "wrote " << records.size() << " records to " << (fs::path(out_dir) / "manifest.jsonl").string() << "\n";
      return 0;
    }
    if (stats->parsed()) {
      out << io::stats_to_json(compute_stats(read_manifest(manifest))).dump(2) << "\n";
      return 0;
    }
    if (splits->parsed()) {
      const auto records = read_manifest(manifest);
      const auto s = make_splits(records, ratio, split_count, split_seed);
      const fs::path dir = splits_out.empty() ? fs::path(manifest).parent_path() : fs::path(splits_out);
      write_splits(s, dir);
      for (std::size_t i = 0; i < s.size(); ++i)
        out << "split" << i + 1 << ": " << s[i].train.size() << " train, " << s[i].test.size() << " test\n";
      return 0;
    }
    if (cam->parsed()) {
      RigParams rig = rig_path.empty() ? default_rig() : io::rig_from_json(io::read_json_file(rig_path));
      if (impulse.size() == 3) rig.impulse = Vec3(impulse[0], impulse[1], impulse[2]);
      const Vec3 focus(0.0, 1.0, 0.0);
      const auto traj = simulate(rig, [focus](double) { return focus; }, fps, duration,
                                 initial_camera_state(rig, focus, 0.0));
      out << "frame,cam_x,cam_y,cam_z,target_x,target_y,target_z,camera_target,target_focus\n";
      for (std::size_t f = 0; f < traj.frames.size(); ++f) {
        const auto& c = traj.frames[f];
        out << f << ','
            << cli_detail::csv_row({c.position.x(), c.position.y(), c.position.z(), c.target.x(), c.target.y(),
                                    c.target.z(), (c.position - c.target).norm(), (c.target - focus).norm()})
            << "\n";
      }
      return 0;
    }
    if (val->parsed()) {
      const auto lib = cli_detail::library_for(in);
      const auto params = cli_detail::params_for(in, lib);
      auto findings = validate_params(params, lib);
      for (const auto& f : findings) out << "finding: " << f.message << "\n";
      std::size_t problems = findings.size();
      if (!val_manifest.empty() && findings.empty()) {
        const auto issues = audit_records(read_manifest(val_manifest), params);
        for (const auto& i : issues) out << "record: " << i << "\n";
        problems += issues.size();
      }
      if (problems == 0) out << "ok\n";
      return problems == 0 ? 0 : 1;
    }
    if (loss->parsed()) {
      const auto p = cooltsn::loss_problem_from_json(io::read_json_file(loss_input));
      const double l = cooltsn::multitask_loss(p.consensus, p.label, p.weights);
      const auto check = cooltsn::check_gradient(p.consensus, p.label, p.weights, fd_step);
      const nlohmann::json report = {
          {"loss", l},
          {"max_relative_error", check.max_relative_error},
          {"gradient",
           {{"real", cooltsn::vector_to_json(check.analytic.real)},
            {"virtual", cooltsn::vector_to_json(check.analytic.virtual_)}}}};
      out << report.dump(2) << "\n";
      return check.max_relative_error < fd_tol ? 0 : 1;
    }
    if (exp_cfg->parsed()) {
      save_params(default_params(), export_path);
      return 0;
    }
    if (exp_lib->parsed()) {
      save_library(default_library(), export_path);
      return 0;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace phav
