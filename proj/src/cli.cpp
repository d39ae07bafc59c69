// Copyright 2026 The FastABC Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fastabc/cli.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fastabc/abc_boost.hpp"
#include "fastabc/dataset.hpp"
#include "fastabc/logit_boost.hpp"
#include "fastabc/logs.hpp"
#include "fastabc/model_io.hpp"

namespace fastabc {

namespace {

using Flags = std::map<std::string, std::string>;

Flags collect_flags(const std::vector<std::string>& args,
                    const std::set<std::string>& with_value,
                    const std::set<std::string>& switches) {
  Flags flags;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.size() < 2 || a[0] != '-')
      throw ConfigError("unexpected argument '" + a + "'");
    const std::string name = a.substr(1);
    if (flags.count(name)) throw ConfigError("flag " + a + " given twice");
    if (switches.count(name)) {
      flags[name] = "1";
    } else if (with_value.count(name)) {
      if (i + 1 >= args.size()) throw ConfigError("flag " + a + " needs a value");
      flags[name] = args[++i];
    } else {
      throw ConfigError("unknown flag '" + a + "'");
    }
  }
  return flags;
}

template <typename T>
T parse_number(const std::string& flag, const std::string& text) {
  T v{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("bad value '" + text + "' for -" + flag);
  return v;
}

template <typename T>
void take(const Flags& flags, const std::string& name, T& into) {
  if (const auto it = flags.find(name); it != flags.end())
    into = parse_number<T>(name, it->second);
}

std::string num(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

// Runs `body` and maps exceptions to exit codes with a one-line message.
template <typename Body>
int guarded(const char* tool, std::ostream& err, Body&& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    err << tool << ": error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << tool << ": error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

TrainOptions parse_train_args(const std::vector<std::string>& args) {
  const Flags flags = collect_flags(
      args,
      {"method", "data", "J", "v", "iter", "lp", "eps", "data_max_n_bins",
       "search", "gap", "warmup"},
      {});
  if (!flags.count("method")) throw ConfigError("-method is required");
  if (!flags.count("data")) throw ConfigError("-data is required");

  TrainOptions o;
  o.method = parse_method(flags.at("method"));
  o.data = flags.at("data");
  take(flags, "J", o.boost.leaves);
  take(flags, "v", o.boost.shrinkage);
  take(flags, "iter", o.boost.iterations);
  take(flags, "data_max_n_bins", o.boost.binner.max_bin);

  const bool regression = o.method == Method::Regression;
  for (const char* f : {"lp", "eps"})
    if (!regression && flags.count(f))
      throw ConfigError(std::string("-") + f + " only applies to -method regression");
  for (const char* f : {"search", "gap", "warmup"})
    if (!is_abc(o.method) && flags.count(f))
      throw ConfigError(std::string("-") + f +
                        " only applies to abcrobustlogit and abcmart");
  take(flags, "lp", o.lp.p);
  take(flags, "eps", o.lp.epsilon);
  take(flags, "search", o.abc.search);
  take(flags, "gap", o.abc.gap);
  take(flags, "warmup", o.abc.warmup);

  o.boost.validate();
  if (regression) o.lp.validate();
  if (is_abc(o.method)) {
    // the class count is only known after loading; check what we can now
    if (o.abc.search < 1) throw ConfigError("search must be >= 1");
    if (o.abc.gap < 0) throw ConfigError("gap must be >= 0");
    if (o.abc.warmup < 0) throw ConfigError("warmup must be >= 0");
  }
  return o;
}

std::string output_stem(const TrainOptions& o) {
  std::string stem = o.data.filename().string() + "_" +
                     std::string(method_name(o.method));
  if (is_abc(o.method))
    stem += std::to_string(o.abc.search) + "g" + std::to_string(o.abc.gap);
  stem += "_J" + std::to_string(o.boost.leaves) + "_v" + num(o.boost.shrinkage);
  if (o.method == Method::Regression) stem += "_p" + num(o.lp.p);
  if (is_abc(o.method)) stem += "_w" + std::to_string(o.abc.warmup);
  return stem;
}

PredictOptions parse_predict_args(const std::vector<std::string>& args) {
  const Flags flags =
      collect_flags(args, {"data", "model", "iterations"}, {"save_prob"});
  if (!flags.count("data")) throw ConfigError("-data is required");
  if (!flags.count("model")) throw ConfigError("-model is required");
  PredictOptions o;
  o.data = flags.at("data");
  o.model = flags.at("model");
  o.save_prob = flags.count("save_prob") > 0;
  if (flags.count("iterations")) {
    o.iterations = parse_number<int>("iterations", flags.at("iterations"));
    if (*o.iterations < 1) throw ConfigError("-iterations must be >= 1");
  }
  return o;
}

std::string model_suffix(const std::filesystem::path& model_path,
                         Method method) {
  std::string stem = model_path.filename().string();
  if (model_path.extension() == ".model") stem = model_path.stem().string();
  const std::string tag = "_" + std::string(method_name(method));
  const auto at = stem.rfind(tag);
  return at == std::string::npos ? stem : stem.substr(at + 1);
}

int run_train(const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err, const std::filesystem::path& out_dir) {
  return guarded("abcboost_train", err, [&] {
    const TrainOptions o = parse_train_args(args);
    const RawDataset raw = load_dataset(o.data);
    const BinnedDataset binned = fit_dataset(raw.features, o.boost.binner);

    std::optional<LabelMap> label_map;
    std::vector<int> labels;
    int K = 0;
    if (o.method != Method::Regression) {
      label_map = LabelMap::fit(raw.labels);
      K = label_map->n_classes();
      if (K < 2) throw ConfigError("classification needs at least 2 classes");
      if (is_abc(o.method)) {
        if (K < 3)
          throw ConfigError("ABC boosting needs at least 3 classes; use "
                            "robustlogit or mart for binary data");
        o.abc.validate(K);
      }
      labels = label_map->encode(raw.labels);
    } else if (raw.n() < 2) {
      throw ConfigError("regression needs at least 2 rows");
    }

    const std::string stem = output_stem(o);
    const std::filesystem::path model_path = out_dir / (stem + ".model");
    const std::filesystem::path log_path = out_dir / (stem + ".trainlog");
    out << "data " << o.data.string() << ": " << raw.n() << " rows, "
        << raw.d() << " features";
    if (K) out << ", " << K << " classes";
    out << '\n';

    std::ofstream log = open_output(log_path);
    const bool base_column = is_abc(o.method);
    const LogSink sink = [&](const IterationLog& rec) {
      log << format_log_line(rec, base_column) << '\n';
    };
    try {
      Model model;
      if (o.method == Method::Regression) {
        model = train_regression(binned, raw.labels, o.boost, o.lp, sink);
      } else {
        ClassificationModel cls =
            is_abc(o.method)
                ? train_abc(binned, labels, K, o.boost, o.abc, o.method, sink)
                : train_logit(binned, labels, K, o.boost, o.method, sink);
        cls.class_labels = label_map->classes;
        model = std::move(cls);
      }
      log.close();
      save_model(model_path, model);
      const int m = std::visit(
          [](const auto& mdl) {
            if constexpr (std::is_same_v<std::decay_t<decltype(mdl)>,
                                         RegressionModel>)
              return mdl.iterations();
            else
              return mdl.n_iterations();
          },
          model);
      out << "trained " << m << " iterations\n"
          << "wrote " << model_path.string() << '\n'
          << "wrote " << log_path.string() << '\n';
    } catch (...) {
      log.close();
      std::error_code ec;
      std::filesystem::remove(log_path, ec);
      std::filesystem::remove(model_path, ec);
      throw;
    }
  });
}

int run_predict(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err, const std::filesystem::path& out_dir) {
  return guarded("abcboost_predict", err, [&] {
    const PredictOptions o = parse_predict_args(args);
    const Model model = load_model(o.model);
    const bool regression = std::holds_alternative<RegressionModel>(model);
    const Method method =
        regression ? Method::Regression
                   : std::get<ClassificationModel>(model).method;
    const Index d = std::visit([](const auto& m) { return m.n_features(); },
                               model);
    const RawDataset raw = load_dataset(o.data, d);
    if (raw.d() != d)
      throw InputError("feature count mismatch: data has " +
                       std::to_string(raw.d()) + ", model expects " +
                       std::to_string(d));

    const std::string stem = o.data.filename().string() + "_" +
                             model_suffix(o.model, method);
    const std::filesystem::path pred_path = out_dir / (stem + ".prediction");
    const std::filesystem::path log_path = out_dir / (stem + ".testlog");
    const std::filesystem::path prob_path = out_dir / (stem + ".probability");

    std::ostringstream log;
    std::ostringstream pred;
    std::ostringstream prob;
    auto clock = std::chrono::steady_clock::now();
    auto lap = [&clock] {
      const auto now = std::chrono::steady_clock::now();
      const double s = std::chrono::duration<double>(now - clock).count();
      clock = now;
      return s;
    };

    int evaluated = 0;
    if (regression) {
      const auto& reg = std::get<RegressionModel>(model);
      const BinMatrix bins = apply_bin_maps(raw.features, reg.bin_maps).bins;
      Eigen::VectorXd final_F = Eigen::VectorXd::Zero(raw.n());
      for_each_stage(
          reg, bins,
          [&](int m, const Eigen::VectorXd& F) {
            IterationLog rec;
            rec.iteration = m;
            rec.loss = lp_loss(raw.labels, F, reg.loss.p);
            rec.seconds = lap();
            log << format_log_line(rec) << '\n';
            final_F = F;
            evaluated = m;
          },
          o.iterations);
      for (Index i = 0; i < final_F.size(); ++i)
        pred << format_double(final_F[i]) << '\n';
    } else {
      const auto& cls = std::get<ClassificationModel>(model);
      LabelMap map{cls.class_labels};
      const std::vector<int> labels = map.encode(raw.labels);
      const BinMatrix bins = apply_bin_maps(raw.features, cls.bin_maps).bins;
      ScoreMatrix final_F = ScoreMatrix::Zero(raw.n(), cls.n_classes);
      const bool base_column = is_abc(cls.method);
      for_each_stage(
          cls, bins,
          [&](int m, const ScoreMatrix& F) {
            IterationLog rec;
            rec.iteration = m;
            rec.loss = multiclass_loss(F, labels);
            rec.errors = count_errors(F, labels);
            rec.base_class = cls.iterations[m - 1].base_class;
            rec.seconds = lap();
            log << format_log_line(rec, base_column) << '\n';
            final_F = F;
            evaluated = m;
          },
          o.iterations);
      for (Index i = 0; i < final_F.rows(); ++i)
        pred << format_double(cls.class_labels[argmax_row(final_F.row(i))])
             << '\n';
      if (o.save_prob) {
        ScoreMatrix P;
        softmax_rows(final_F, P);
        for (Index i = 0; i < P.rows(); ++i) {
          for (Index k = 0; k < P.cols(); ++k)
            prob << (k ? " " : "") << format_double(P(i, k));
          prob << '\n';
        }
      }
    }

    open_output(log_path) << log.str();
    open_output(pred_path) << pred.str();
    if (o.save_prob && !regression) open_output(prob_path) << prob.str();
    out << "data " << o.data.string() << ": " << raw.n() << " rows, evaluated "
        << evaluated << " iterations\n"
        << "wrote " << pred_path.string() << '\n'
        << "wrote " << log_path.string() << '\n';
    if (o.save_prob && !regression)
      out << "wrote " << prob_path.string() << '\n';
  });
}

}  // namespace fastabc
