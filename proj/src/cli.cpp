#include "fadjoint/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "fadjoint/deltarule.hpp"
#include "fadjoint/fadjoint.hpp"
#include "fadjoint/fprop.hpp"
#include "fadjoint/fsym.hpp"
#include "fadjoint/gradcheck.hpp"
#include "fadjoint/network.hpp"
#include "fadjoint/trainer.hpp"

namespace fadjoint::cli {

namespace {

using nlohmann::json;

/// Raised for bad flags, unreadable files and malformed data; maps to exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt_real(double x, int digits = 12) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string fmt_vector(const Vector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i > 0) s += ", ";
    s += fmt_real(v[i]);
  }
  return s + "]";
}

std::string fmt_matrix(const Matrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i > 0) s += ", ";
    s += "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) s += ", ";
      s += fmt_real(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

json to_json(const Vector& v) { return json(std::vector<double>(v.begin(), v.end())); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const GradientReport& r) {
  return {{"pass", r.pass},
          {"max_abs_error", r.max_abs_error},
          {"max_rel_error", r.max_rel_error},
          {"worst", {{"layer", r.worst_layer}, {"row", r.worst_row}, {"col", r.worst_col}}},
          {"atol", r.atol},
          {"rtol", r.rtol}};
}

void print_json(std::ostream& out, const json& j) {
  out << j.dump(2) << '\n';
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FADJOINT_SEED"); env != nullptr && *env != '\0') {
    const std::string_view text(env);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw UsageError("FADJOINT_SEED must be a non-negative integer, got '" + std::string(text) +
                       "'");
    }
    return value;
  }
  return 0;
}

template <class Fn>
auto usage_guard(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Network load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open model file '" + path + "'");
  try {
    return load_model(in);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// demo -----------------------------------------------------------------------

struct DemoOptions {
  std::string which;
  std::optional<double> x;
  double y = 0.0;
  std::string weights_path;
  std::string activation = "identity";
  bool json = false;
};

Network demo_network(const DemoOptions& opt, bool activation_given) {
  const bool a111 = opt.which == "a111";
  Architecture arch{a111 ? std::vector<std::size_t>{1, 1, 1} : std::vector<std::size_t>{1, 2, 1},
                    BiasMode::augmented, usage_guard([&] { return parse_activation(opt.activation); })};
  if (opt.weights_path.empty()) {
    if (a111) return Network(arch, {Matrix{{2.0, 1.0}}, Matrix{{3.0, -1.0}}});
    return Network(arch, {Matrix{{1.0, 0.0}, {-1.0, 1.0}}, Matrix{{1.0, 2.0, 0.5}}});
  }
  Network loaded = load_model_file(opt.weights_path);
  if (loaded.arch().layer_sizes != arch.layer_sizes || loaded.bias_mode() != BiasMode::augmented) {
    throw UsageError(opt.weights_path + ": demo " + opt.which + " needs an augmented " +
                     format_layer_sizes(arch.layer_sizes) + " model, file has " +
                     std::string(to_string(loaded.bias_mode())) + " " +
                     format_layer_sizes(loaded.arch().layer_sizes));
  }
  if (!activation_given) arch.activation = loaded.activation();
  return Network(arch, loaded.weights());
}

int cmd_demo(const DemoOptions& opt, bool activation_given, std::ostream& out) {
  const Network net = demo_network(opt, activation_given);
  const double x = opt.x.value_or(opt.which == "a111" ? 0.5 : 1.0);
  const Vector input{x};
  const Vector target{opt.y};
  const std::size_t depth = net.depth();

  const FPropagation record = forward(net, input);
  const Vector seed = loss_seed(LossKind::elementary, output(record), target);
  const FAdjoint adjoint = fadjoint_pass(net, record, seed);
  const GradientSet grads = weight_gradients(record, adjoint);
  const double cost = loss_value(LossKind::elementary, output(record), target);

  if (opt.json) {
    json f = json::object();
    f["X0"] = to_json(record.x(0));
    for (std::size_t h = 1; h <= depth; ++h) {
      f["Y" + std::to_string(h)] = to_json(record.y(h));
      f["X" + std::to_string(h)] = to_json(record.x(h));
    }
    json fstar = json::object();
    for (std::size_t h = depth; h >= 1; --h) {
      fstar["X" + std::to_string(h) + "*"] = to_json(adjoint.xstar(h));
      fstar["Y" + std::to_string(h) + "*"] = to_json(adjoint.ystar(h));
    }
    fstar["X0*"] = to_json(adjoint.xstar(0));
    json g = json::object();
    for (std::size_t h = 1; h <= depth; ++h) g["W" + std::to_string(h)] = to_json(grads.layer(h));
    print_json(out, {{"command", "demo"},
                     {"case", opt.which},
                     {"arch", format_layer_sizes(net.arch().layer_sizes)},
                     {"activation", to_string(net.activation())},
                     {"x", x},
                     {"y", opt.y},
                     {"cost", cost},
                     {"F", f},
                     {"F_star", fstar},
                     {"gradients", g}});
    return kExitOk;
  }

  std::string sizes = format_layer_sizes(net.arch().layer_sizes);
  std::replace(sizes.begin(), sizes.end(), '-', ',');
  out << "A[" << sizes << "] augmented, activation "
      << to_string(net.activation()) << ", x = " << fmt_real(x) << ", y = " << fmt_real(opt.y)
      << "\n";
  for (std::size_t h = 1; h <= depth; ++h) {
    out << "  W^" << h << " = " << fmt_matrix(net.weight(h)) << "\n";
  }
  out << "F-propagation\n";
  out << "  X^0 = " << fmt_vector(record.x(0)) << "\n";
  for (std::size_t h = 1; h <= depth; ++h) {
    out << "  Y^" << h << " = " << fmt_vector(record.y(h)) << "\n";
    out << "  X^" << h << " = " << fmt_vector(record.x(h)) << "\n";
  }
  out << "F-adjoint (elementary cost J = f(x) - y)\n";
  for (std::size_t h = depth; h >= 1; --h) {
    out << "  X^" << h << "_* = " << fmt_vector(adjoint.xstar(h)) << "\n";
    out << "  Y^" << h << "_* = " << fmt_vector(adjoint.ystar(h)) << "\n";
  }
  out << "  X^0_* = " << fmt_vector(adjoint.xstar(0)) << "\n";
  out << "Gradients\n";
  for (std::size_t h = 1; h <= depth; ++h) {
    out << "  dJ/dW^" << h << " = " << fmt_matrix(grads.layer(h)) << "\n";
  }
  out << "J(f(x), y) = " << fmt_real(cost) << "\n";
  return kExitOk;
}

// gradcheck ------------------------------------------------------------------

struct GradcheckOptions {
  std::string arch;
  std::string activation = "sigmoid";
  std::string bias = "augmented";
  std::string loss = "mse";
  std::optional<std::uint64_t> seed;
  std::size_t trials = 10;
  double step = kDefaultFdStep;
  double atol = kDefaultAtol;
  double rtol = kDefaultRtol;
  double oracle_rtol = 1e-12;
  bool json = false;
};

int cmd_gradcheck(const GradcheckOptions& opt, std::ostream& out) {
  Architecture arch = usage_guard([&] {
    return Architecture{parse_layer_sizes(opt.arch), parse_bias_mode(opt.bias),
                        parse_activation(opt.activation)};
  });
  const LossKind loss = usage_guard([&] { return parse_loss(opt.loss); });
  if (opt.trials == 0) throw UsageError("--trials must be at least 1");
  const std::uint64_t seed = resolve_seed(opt.seed);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  bool all_pass = true;
  json trials = json::array();
  if (!opt.json) {
    std::string sizes = opt.arch;
    std::replace(sizes.begin(), sizes.end(), '-', ',');
    out << "gradcheck A[" << sizes << "] " << opt.bias << ", activation " << opt.activation
        << ", loss " << opt.loss << ", seed " << seed << ", " << opt.trials << " trials\n";
  }
  for (std::size_t t = 1; t <= opt.trials; ++t) {
    const Network net = init(arch, InitScheme::uniform(1.0), rng());
    Vector input(arch.input_dim());
    Vector target(arch.output_dim());
    for (std::size_t i = 0; i < input.dim(); ++i) input[i] = unit(rng);
    for (std::size_t i = 0; i < target.dim(); ++i) target[i] = unit(rng);

    const FPropagation record = forward(net, input);
    const Vector seed_vec = loss_seed(loss, output(record), target);
    const GradientSet adjoint_grads = weight_gradients(record, fadjoint_pass(net, record, seed_vec));
    const GradientSet delta_grads = deltarule::backprop(net, record, seed_vec);
    const GradientSet numeric = numeric_gradient(net, input, target, loss, opt.step);

    const GradientReport vs_delta = compare(adjoint_grads, delta_grads, 0.0, opt.oracle_rtol);
    const GradientReport vs_numeric = compare(adjoint_grads, numeric, opt.atol, opt.rtol);
    all_pass = all_pass && vs_delta.pass && vs_numeric.pass;
    if (opt.json) {
      trials.push_back(
          {{"trial", t}, {"vs_deltarule", to_json(vs_delta)}, {"vs_numeric", to_json(vs_numeric)}});
    } else {
      out << "  trial " << t << "\n";
      out << "    fadjoint vs deltarule  " << describe(vs_delta) << "\n";
      out << "    fadjoint vs numeric    " << describe(vs_numeric) << "\n";
    }
  }
  if (opt.json) {
    print_json(out, {{"command", "gradcheck"},
                     {"arch", opt.arch},
                     {"bias", opt.bias},
                     {"activation", opt.activation},
                     {"loss", opt.loss},
                     {"seed", seed},
                     {"trials", trials},
                     {"pass", all_pass}});
  } else {
    out << (all_pass ? "PASS" : "FAIL") << "\n";
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

// train ----------------------------------------------------------------------

struct TrainOptions {
  std::string data_path;
  std::string arch;
  std::string activation = "sigmoid";
  std::string bias = "augmented";
  std::string loss = "mse";
  std::string init_scheme = "uniform:0.5";
  std::string out_path = "model.txt";
  double lr = 0.1;
  std::size_t epochs = 1000;
  std::size_t log_every = 100;
  std::optional<std::uint64_t> seed;
  bool no_shuffle = false;
  bool json = false;
};

int cmd_train(const TrainOptions& opt, std::ostream& out) {
  const Architecture arch = usage_guard([&] {
    return Architecture{parse_layer_sizes(opt.arch), parse_bias_mode(opt.bias),
                        parse_activation(opt.activation)};
  });
  const InitScheme scheme = usage_guard([&] { return parse_init_scheme(opt.init_scheme); });
  TrainConfig cfg;
  cfg.learning_rate = opt.lr;
  cfg.epochs = opt.epochs;
  cfg.loss = usage_guard([&] { return parse_loss(opt.loss); });
  cfg.log_every = opt.log_every;
  usage_guard([&] {
    cfg.validate();
    return 0;
  });
  const std::uint64_t seed = resolve_seed(opt.seed);
  if (!opt.no_shuffle) cfg.shuffle_seed = seed;

  std::ifstream in(opt.data_path);
  if (!in) throw UsageError("cannot open data file '" + opt.data_path + "'");
  const Dataset data = [&] {
    try {
      return load_csv(in, arch.input_dim(), arch.output_dim());
    } catch (const ParseError& e) {
      throw UsageError(opt.data_path + ": " + e.what());
    }
  }();

  const Network start = init(arch, scheme, seed);
  json log = json::array();
  const TrainResult result = train(start, data, cfg, [&](std::size_t epoch, double loss) {
    if (opt.json) {
      log.push_back({{"epoch", epoch}, {"mean_loss", loss}});
    } else {
      out << "epoch " << epoch << "  mean_loss " << fmt_real(loss, 10) << "\n";
    }
  });

  std::ofstream model(opt.out_path);
  if (!model) throw UsageError("cannot write model file '" + opt.out_path + "'");
  save_model(result.net, model);
  model.close();

  const double final_loss = result.history.back();
  if (opt.json) {
    print_json(out, {{"command", "train"},
                     {"arch", opt.arch},
                     {"epochs", opt.epochs},
                     {"learning_rate", opt.lr},
                     {"seed", seed},
                     {"log", log},
                     {"final_mean_loss", final_loss},
                     {"model", opt.out_path}});
  } else {
    out << "final mean_loss " << fmt_real(final_loss, 10) << "\n";
    out << "model written to " << opt.out_path << "\n";
  }
  return kExitOk;
}

// fsym -----------------------------------------------------------------------

struct FsymOptions {
  std::size_t width = 4;
  std::size_t depth = 3;
  std::optional<std::uint64_t> seed;
  std::string eps = "0";
  bool json = false;
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !(v >= 0.0)) {
      throw UsageError("--eps expects comma-separated non-negative numbers, got '" + text + "'");
    }
    grid.push_back(v);
  }
  if (grid.empty()) throw UsageError("--eps is empty");
  return grid;
}

int cmd_fsym(const FsymOptions& opt, std::ostream& out) {
  if (opt.width == 0 || opt.depth == 0) throw UsageError("--width and --depth must be >= 1");
  const std::vector<double> grid = parse_grid(opt.eps);
  const std::uint64_t seed = resolve_seed(opt.seed);
  const auto rows = sweep_nonorthogonality(opt.width, opt.depth, grid, seed);
  if (opt.json) {
    json table = json::array();
    for (const auto& r : rows) {
      table.push_back({{"epsilon", r.epsilon}, {"max_dev_X", r.max_dev_x}, {"max_dev_Y", r.max_dev_y}});
    }
    print_json(out, {{"command", "fsym"},
                     {"width", opt.width},
                     {"depth", opt.depth},
                     {"seed", seed},
                     {"rows", table}});
    return kExitOk;
  }
  out << "epsilon,max_dev_X,max_dev_Y\n";
  for (const auto& r : rows) {
    out << fmt_real(r.epsilon) << ',' << fmt_real(r.max_dev_x, 17) << ','
        << fmt_real(r.max_dev_y, 17) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feed-forward network engine with an F-adjoint backward pass"};
  app.name("fadjoint");
  app.require_subcommand(1);

  DemoOptions demo;
  auto* demo_cmd = app.add_subcommand("demo", "Worked A[1,1,1] / A[1,2,1] examples");
  demo_cmd->add_option("which", demo.which, "Case: a111 or a121")
      ->required()
      ->check(CLI::IsMember({"a111", "a121"}));
  demo_cmd->add_option("--x", demo.x, "Scalar input (default 0.5 for a111, 1 for a121)");
  demo_cmd->add_option("--y", demo.y, "Target in the elementary cost J = f(x) - y");
  demo_cmd->add_option("--weights", demo.weights_path, "Model file with replacement weights");
  auto* demo_act = demo_cmd->add_option("--activation", demo.activation,
                                        "identity|sigmoid|tanh|relu");
  demo_cmd->add_flag("--json", demo.json, "Emit a JSON report");

  GradcheckOptions gc;
  auto* gc_cmd = app.add_subcommand("gradcheck", "Compare F-adjoint, delta rule and finite differences");
  gc_cmd->add_option("--arch", gc.arch, "Layer sizes, e.g. 2-3-1")->required();
  gc_cmd->add_option("--activation", gc.activation, "identity|sigmoid|tanh|relu");
  gc_cmd->add_option("--bias", gc.bias, "augmented|plain");
  gc_cmd->add_option("--loss", gc.loss, "mse|elementary");
  gc_cmd->add_option("--seed", gc.seed, "RNG seed (default: $FADJOINT_SEED or 0)");
  gc_cmd->add_option("--trials", gc.trials, "Number of random draws");
  gc_cmd->add_option("--step", gc.step, "Central-difference step")->check(CLI::PositiveNumber);
  gc_cmd->add_option("--atol", gc.atol, "Absolute tolerance vs finite differences");
  gc_cmd->add_option("--rtol", gc.rtol, "Relative tolerance vs finite differences");
  gc_cmd->add_flag("--json", gc.json, "Emit a JSON report");

  TrainOptions tr;
  auto* tr_cmd = app.add_subcommand("train", "Per-sample gradient descent on a CSV dataset");
  tr_cmd->add_option("data", tr.data_path, "CSV file: inputs then targets per row")->required();
  tr_cmd->add_option("--arch", tr.arch, "Layer sizes, e.g. 2-2-1")->required();
  tr_cmd->add_option("--activation", tr.activation, "identity|sigmoid|tanh|relu");
  tr_cmd->add_option("--bias", tr.bias, "augmented|plain");
  tr_cmd->add_option("--loss", tr.loss, "mse|elementary");
  tr_cmd->add_option("--init", tr.init_scheme, "xavier|zeros|uniform:<r>");
  tr_cmd->add_option("--lr", tr.lr, "Learning rate");
  tr_cmd->add_option("--epochs", tr.epochs, "Number of epochs");
  tr_cmd->add_option("--log-every", tr.log_every, "Print the mean loss every N epochs (0: never)");
  tr_cmd->add_option("--seed", tr.seed, "Init and shuffle seed (default: $FADJOINT_SEED or 0)");
  tr_cmd->add_flag("--no-shuffle", tr.no_shuffle, "Visit samples in file order");
  tr_cmd->add_option("--out", tr.out_path, "Output model file");
  tr_cmd->add_flag("--json", tr.json, "Emit a JSON report");

  FsymOptions fs;
  auto* fs_cmd = app.add_subcommand("fsym", "F-symmetry sweep over perturbed orthogonal weights");
  fs_cmd->add_option("--width", fs.width, "Layer width");
  fs_cmd->add_option("--depth", fs.depth, "Number of layers");
  fs_cmd->add_option("--seed", fs.seed, "RNG seed (default: $FADJOINT_SEED or 0)");
  fs_cmd->add_option("--eps", fs.eps, "Comma-separated perturbation scales");
  fs_cmd->add_flag("--json", fs.json, "Emit a JSON report");

  std::vector<std::string> storage{"fadjoint"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*demo_cmd) return cmd_demo(demo, demo_act->count() > 0, out);
    if (*gc_cmd) return cmd_gradcheck(gc, out);
    if (*tr_cmd) return cmd_train(tr, out);
    if (*fs_cmd) return cmd_fsym(fs, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fadjoint::cli
