#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "mcl/metric_tree.hpp"

namespace mcl {

namespace {

constexpr char kTreeMagic[4] = {'M', 'C', 'T', '1'};
constexpr std::uint32_t kTreeVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in, const char* what) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw Error(Errc::io, std::string("truncated tree file at ") + what);
  return v;
}

void put_point(std::ostream& out, const Point& p) {
  put(out, static_cast<std::uint8_t>(p.is_binary() ? 0 : 1));
  put(out, static_cast<std::uint32_t>(p.is_binary() ? p.bits.size() : p.reals.size()));
  if (p.is_binary())
    out.write(reinterpret_cast<const char*>(p.bits.data()),
              static_cast<std::streamsize>(p.bits.size() * sizeof(std::uint64_t)));
  else
    out.write(reinterpret_cast<const char*>(p.reals.data()),
              static_cast<std::streamsize>(p.reals.size() * sizeof(double)));
}

Point get_point(std::istream& in) {
  const auto tag = get<std::uint8_t>(in, "point tag");
  const auto count = get<std::uint32_t>(in, "point size");
  Point p;
  if (tag == 0) {
    p.bits.resize(count);
    if (!in.read(reinterpret_cast<char*>(p.bits.data()),
                 static_cast<std::streamsize>(count * sizeof(std::uint64_t))))
      throw Error(Errc::io, "truncated tree file at point words");
  } else {
    p.reals.resize(count);
    if (!in.read(reinterpret_cast<char*>(p.reals.data()),
                 static_cast<std::streamsize>(count * sizeof(double))))
      throw Error(Errc::io, "truncated tree file at point coords");
  }
  return p;
}

void put_fn(std::ostream& out, const DecisionFunction& f) {
  if (const auto* vp = std::get_if<VantagePair>(&f.fn)) {
    put(out, static_cast<std::uint8_t>(0));
    put_point(out, vp->plus);
    put_point(out, vp->minus);
  } else if (const auto* ball = std::get_if<BallAround>(&f.fn)) {
    put(out, static_cast<std::uint8_t>(1));
    put_point(out, ball->center);
    put(out, ball->radius);
  } else {
    const auto& piv = std::get<PivotThreshold>(f.fn);
    put(out, static_cast<std::uint8_t>(2));
    put_point(out, piv.anchor);
    put(out, piv.threshold);
  }
}

DecisionFunction get_fn(std::istream& in, const DomainSpec& spec) {
  const auto tag = get<std::uint8_t>(in, "decision function tag");
  DecisionFunction f;
  f.domain = spec;
  switch (tag) {
    case 0: {
      Point plus = get_point(in);
      Point minus = get_point(in);
      f.fn = VantagePair{std::move(plus), std::move(minus)};
      break;
    }
    case 1: {
      Point center = get_point(in);
      const auto radius = get<double>(in, "ball radius");
      f.fn = BallAround{std::move(center), radius};
      break;
    }
    case 2: {
      Point anchor = get_point(in);
      const auto threshold = get<double>(in, "pivot threshold");
      f.fn = PivotThreshold{std::move(anchor), threshold};
      break;
    }
    default:
      throw Error(Errc::io, "unknown decision function tag " + std::to_string(tag));
  }
  return f;
}

}  // namespace

void write_tree(std::ostream& out, const MetricTree& tree) {
  out.write(kTreeMagic, 4);
  put(out, kTreeVersion);
  put(out, static_cast<std::uint8_t>(tree.spec.kind));
  put(out, tree.spec.dim);
  put(out, tree.spec.norm);
  put(out, static_cast<std::uint8_t>(tree.params.strategy));
  put(out, tree.params.bin_capacity);
  put(out, tree.params.candidates);
  put(out, tree.params.max_depth);
  put(out, tree.seed);
  put(out, tree.dataset_size);
  put(out, tree.dataset_hash);
  put(out, tree.root);
  put(out, static_cast<std::uint64_t>(tree.nodes.size()));
  for (const TreeNode& node : tree.nodes) {
    put(out, static_cast<std::uint8_t>(node.is_leaf() ? 1 : 0));
    if (node.is_leaf()) {
      put(out, static_cast<std::uint64_t>(node.bin.size()));
      out.write(reinterpret_cast<const char*>(node.bin.data()),
                static_cast<std::streamsize>(node.bin.size() * sizeof(std::uint32_t)));
    } else {
      put_fn(out, *node.fn);
      put(out, static_cast<std::uint32_t>(node.minus_child));
      put(out, static_cast<std::uint32_t>(node.plus_child));
    }
  }
  if (!out) throw Error(Errc::io, "failed writing tree");
}

MetricTree read_tree(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kTreeMagic, 4) != 0)
    throw Error(Errc::io, "not an MCT1 tree file");
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kTreeVersion)
    throw Error(Errc::io, "unsupported tree version " + std::to_string(version));
  MetricTree tree;
  tree.spec.kind = static_cast<DomainKind>(get<std::uint8_t>(in, "kind"));
  tree.spec.dim = get<std::uint32_t>(in, "dim");
  tree.spec.norm = get<double>(in, "norm");
  tree.params.strategy = static_cast<Strategy>(get<std::uint8_t>(in, "strategy"));
  tree.params.bin_capacity = get<std::uint32_t>(in, "bin capacity");
  tree.params.candidates = get<std::uint32_t>(in, "candidates");
  tree.params.max_depth = get<std::uint32_t>(in, "max depth");
  tree.seed = get<std::uint64_t>(in, "seed");
  tree.dataset_size = get<std::uint64_t>(in, "dataset size");
  tree.dataset_hash = get<std::uint64_t>(in, "dataset hash");
  tree.root = get<std::uint32_t>(in, "root");
  const auto count = get<std::uint64_t>(in, "node count");
  tree.nodes.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    TreeNode node;
    const auto tag = get<std::uint8_t>(in, "node tag");
    if (tag == 1) {
      const auto size = get<std::uint64_t>(in, "bin size");
      node.bin.resize(size);
      if (size > 0 &&
          !in.read(reinterpret_cast<char*>(node.bin.data()),
                   static_cast<std::streamsize>(size * sizeof(std::uint32_t))))
        throw Error(Errc::io, "truncated tree file at bin");
    } else if (tag == 0) {
      node.fn = get_fn(in, tree.spec);
      node.minus_child = static_cast<std::int32_t>(get<std::uint32_t>(in, "minus child"));
      node.plus_child = static_cast<std::int32_t>(get<std::uint32_t>(in, "plus child"));
    } else {
      throw Error(Errc::io, "unknown node tag " + std::to_string(tag));
    }
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

void save_tree(const std::string& path, const MetricTree& tree) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open '" + path + "' for writing");
  write_tree(out, tree);
}

MetricTree load_tree(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open tree file '" + path + "'");
  return read_tree(in);
}

}  // namespace mcl
