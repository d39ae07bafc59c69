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

#include "fastabc/model_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace fastabc {

namespace {

// Layout (one record per line):
//
//   fastabc-model 1
//   method <name>
//   leaves <J>
//   shrinkage <v>
//   lp <p> <eps>                        regression only
//   classes <K> <label_0> ...           classification only
//   abc <s> <g> <w>                     abc methods only
//   features <d>
//   bins <final_bin_len> <n> <b_1> ... <b_n>        d times
//   iterations <M>
//   iteration <base or -1>              classification only, then K trees
//   tree <nodes> | none
//   S <feature> <threshold> <left> <right> | L <value>    per node
//   end

void write_tree(std::ostream& out, const RegressionTree& tree) {
  out << "tree " << tree.nodes().size() << '\n';
  for (const RegressionTree::Node& node : tree.nodes()) {
    if (node.is_leaf()) {
      out << "L " << format_double(node.value) << '\n';
    } else {
      out << "S " << node.feature << ' ' << node.threshold_bin << ' '
          << node.left << ' ' << node.right << '\n';
    }
  }
}

void write_bin_maps(std::ostream& out, const std::vector<FeatureBinMap>& maps) {
  out << "features " << maps.size() << '\n';
  for (const FeatureBinMap& map : maps) {
    out << "bins " << format_double(map.final_bin_len) << ' '
        << map.boundaries.size();
    for (double b : map.boundaries) out << ' ' << format_double(b);
    out << '\n';
  }
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) fail("unexpected end of model file");
    return w;
  }

  void expect(std::string_view keyword) {
    const std::string w = word();
    if (w != keyword)
      fail("expected '" + std::string(keyword) + "', found '" + w + "'");
  }

  double real() {
    const std::string w = word();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size())
      fail("bad number '" + w + "'");
    return v;
  }

  long long integer(long long lo, long long hi) {
    const std::string w = word();
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size())
      fail("bad integer '" + w + "'");
    if (v < lo || v > hi)
      fail("value " + w + " out of range [" + std::to_string(lo) + ", " +
           std::to_string(hi) + "]");
    return v;
  }

  [[noreturn]] static void fail(const std::string& what) {
    throw InputError("model file: " + what);
  }

 private:
  std::istream& in_;
};

constexpr long long kMaxCount = 1LL << 31;

std::vector<FeatureBinMap> read_bin_maps(Reader& r) {
  r.expect("features");
  const auto d = r.integer(1, kMaxCount);
  std::vector<FeatureBinMap> maps(d);
  for (FeatureBinMap& map : maps) {
    r.expect("bins");
    map.final_bin_len = r.real();
    const auto n = r.integer(0, kMaxCount);
    map.boundaries.resize(n);
    for (double& b : map.boundaries) b = r.real();
    for (std::size_t i = 1; i < map.boundaries.size(); ++i)
      if (!(map.boundaries[i - 1] < map.boundaries[i]))
        Reader::fail("bin boundaries not increasing");
  }
  return maps;
}

RegressionTree read_tree(Reader& r, const std::vector<FeatureBinMap>& maps) {
  const auto n = r.integer(1, kMaxCount);
  std::vector<RegressionTree::Node> nodes(n);
  for (RegressionTree::Node& node : nodes) {
    const std::string kind = r.word();
    if (kind == "L") {
      node.value = r.real();
    } else if (kind == "S") {
      node.feature = r.integer(0, static_cast<long long>(maps.size()) - 1);
      node.threshold_bin = static_cast<BinIndex>(
          r.integer(0, maps[node.feature].n_bins() - 1));
      node.left = static_cast<int>(r.integer(0, n - 1));
      node.right = static_cast<int>(r.integer(0, n - 1));
    } else {
      Reader::fail("bad node kind '" + kind + "'");
    }
  }
  return RegressionTree(std::move(nodes));
}

std::optional<RegressionTree> read_optional_tree(
    Reader& r, const std::vector<FeatureBinMap>& maps) {
  const std::string w = r.word();
  if (w == "none") return std::nullopt;
  if (w != "tree") Reader::fail("expected 'tree' or 'none', found '" + w + "'");
  return read_tree(r, maps);
}

void check_iteration(const ClassificationModel& model,
                     const BoostIteration& it) {
  const int K = model.n_classes;
  for (int k = 0; k < K; ++k) {
    bool expect_tree = true;
    if (it.base_class) expect_tree = k != *it.base_class;
    else if (K == 2) expect_tree = k == 1;
    if (it.trees[k].has_value() != expect_tree)
      Reader::fail("tree layout of an iteration does not match its method");
  }
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

void write_model(std::ostream& out, const Model& model) {
  out << kModelMagic << ' ' << kModelVersion << '\n';
  if (const auto* reg = std::get_if<RegressionModel>(&model)) {
    out << "method " << method_name(Method::Regression) << '\n'
        << "leaves " << reg->leaves << '\n'
        << "shrinkage " << format_double(reg->shrinkage) << '\n'
        << "lp " << format_double(reg->loss.p) << ' '
        << format_double(reg->loss.epsilon) << '\n';
    write_bin_maps(out, reg->bin_maps);
    out << "iterations " << reg->trees.size() << '\n';
    for (const RegressionTree& tree : reg->trees) write_tree(out, tree);
  } else {
    const auto& cls = std::get<ClassificationModel>(model);
    out << "method " << method_name(cls.method) << '\n'
        << "leaves " << cls.leaves << '\n'
        << "shrinkage " << format_double(cls.shrinkage) << '\n'
        << "classes " << cls.n_classes;
    for (double label : cls.class_labels) out << ' ' << format_double(label);
    out << '\n';
    if (is_abc(cls.method))
      out << "abc " << cls.abc.search << ' ' << cls.abc.gap << ' '
          << cls.abc.warmup << '\n';
    write_bin_maps(out, cls.bin_maps);
    out << "iterations " << cls.iterations.size() << '\n';
    for (const BoostIteration& it : cls.iterations) {
      out << "iteration " << (it.base_class ? *it.base_class : -1) << '\n';
      for (const auto& tree : it.trees) {
        if (tree) write_tree(out, *tree);
        else out << "none\n";
      }
    }
  }
  out << "end\n";
}

std::string model_to_string(const Model& model) {
  std::ostringstream out;
  write_model(out, model);
  return out.str();
}

Model read_model(std::istream& in) {
  Reader r(in);
  r.expect(kModelMagic);
  if (r.integer(0, kMaxCount) != kModelVersion)
    Reader::fail("unsupported version");
  r.expect("method");
  Method method{};
  try {
    method = parse_method(r.word());
  } catch (const ConfigError& e) {
    Reader::fail(e.what());
  }
  r.expect("leaves");
  const int leaves = static_cast<int>(r.integer(2, kMaxCount));
  r.expect("shrinkage");
  const double shrinkage = r.real();
  if (!(shrinkage > 0.0 && shrinkage <= 1.0)) Reader::fail("bad shrinkage");

  if (method == Method::Regression) {
    RegressionModel m;
    m.leaves = leaves;
    m.shrinkage = shrinkage;
    r.expect("lp");
    m.loss.p = r.real();
    m.loss.epsilon = r.real();
    try {
      m.loss.validate();
    } catch (const ConfigError& e) {
      Reader::fail(e.what());
    }
    m.bin_maps = read_bin_maps(r);
    r.expect("iterations");
    m.trees.resize(r.integer(0, kMaxCount));
    for (RegressionTree& tree : m.trees) {
      r.expect("tree");
      tree = read_tree(r, m.bin_maps);
    }
    r.expect("end");
    return m;
  }

  ClassificationModel m;
  m.method = method;
  m.leaves = leaves;
  m.shrinkage = shrinkage;
  r.expect("classes");
  m.n_classes = static_cast<int>(r.integer(is_abc(method) ? 3 : 2, kMaxCount));
  m.class_labels.resize(m.n_classes);
  for (double& label : m.class_labels) label = r.real();
  if (is_abc(method)) {
    r.expect("abc");
    m.abc.search = static_cast<int>(r.integer(1, m.n_classes));
    m.abc.gap = static_cast<int>(r.integer(0, kMaxCount));
    m.abc.warmup = static_cast<int>(r.integer(0, kMaxCount));
  }
  m.bin_maps = read_bin_maps(r);
  r.expect("iterations");
  m.iterations.resize(r.integer(0, kMaxCount));
  for (BoostIteration& it : m.iterations) {
    r.expect("iteration");
    const auto base = r.integer(-1, m.n_classes - 1);
    if (base >= 0) {
      if (!is_abc(method)) Reader::fail("base class in a non-ABC model");
      it.base_class = static_cast<int>(base);
    }
    it.trees.resize(m.n_classes);
    for (auto& tree : it.trees) tree = read_optional_tree(r, m.bin_maps);
    check_iteration(m, it);
  }
  r.expect("end");
  return m;
}

Model model_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

void save_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write model file " + path.string());
  write_model(out, model);
  if (!out) throw InputError("error writing model file " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace fastabc
