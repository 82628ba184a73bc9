#include "bcg/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bcg {
namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<int> sample_distinct(int n, int count, Rng& rng) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < count; ++i) {
    const auto j = i + rng.uniform_int(n - i);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(count));
  return idx;
}

Eigen::VectorXd gaussian_vector(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = rng.normal();
  return M;
}

const char* atom_family_name(AtomFamily f) {
  switch (f) {
    case AtomFamily::Coordinate:
      return "coordinate";
    case AtomFamily::SignedCoordinate:
      return "signed_coordinate";
    case AtomFamily::CubeCorner:
      return "cube_corner";
    case AtomFamily::Permutation:
      return "permutation";
    case AtomFamily::ArcSet:
      return "arcset";
    case AtomFamily::Generic:
      return "generic";
  }
  return "?";
}

nlohmann::json atom_to_json(const Atom& a) {
  return {{"family", atom_family_name(a.key().family)}, {"data", a.key().data}};
}

nlohmann::json base_meta(const char* family, std::uint64_t seed) {
  return {{"family", family}, {"seed", seed}, {"rng", std::string(Rng::kVersion)}};
}

Instance make_lasso(const LassoSpec& s, std::uint64_t seed) {
  if (s.m < 1 || s.n < 1 || s.nnz < 1 || s.nnz > s.n || !(s.scale > 0))
    throw std::invalid_argument("lasso spec: bad parameters");
  Rng rng(seed);
  const Eigen::MatrixXd A = gaussian_matrix(s.m, s.n, rng);
  // Planted signal with l1 norm 2*scale: the set of unconstrained minimizers
  // contains it, and it sits strictly outside the radius-scale ball.
  const auto support = sample_distinct(s.n, s.nnz, rng);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(s.n);
  for (int i : support) x0[i] = rng.normal();
  const double l1 = x0.cwiseAbs().sum();
  x0 *= 2.0 * s.scale / l1;
  const Eigen::VectorXd b = A * x0;

  Instance inst{std::make_unique<QuadraticObjective>(A, b),
                std::make_unique<L1Ball>(s.n, s.scale),
                Atom(AtomKey{}, Eigen::VectorXd{}), {}};
  inst.start = static_cast<const L1Ball&>(*inst.region).vertex(0, +1);
  inst.meta = base_meta("lasso", seed);
  inst.meta["params"] = {{"m", s.m}, {"n", s.n}, {"nnz", s.nnz}, {"scale", s.scale}};
  inst.meta["region"] = {{"kind", "l1ball"}, {"n", s.n}, {"tau", s.scale}};
  inst.meta["start"] = atom_to_json(inst.start);
  inst.meta["notes"] = {{"planted_l1", 2.0 * s.scale},
                        {"planted_support", s.nnz},
                        {"f_at_planted", 0.0},
                        {"unconstrained_minimizer_outside", true}};
  return inst;
}

Instance make_signal(const SignalRecoverySpec& s, std::uint64_t seed) {
  if (s.m < 1 || s.n < 1 || !(s.density > 0 && s.density <= 1) || s.sigma < 0)
    throw std::invalid_argument("signal spec: bad parameters");
  Rng rng(seed);
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < s.m; ++i)
    for (int j = 0; j < s.n; ++j)
      if (rng.uniform01() < s.density) trips.emplace_back(i, j, rng.normal());
  Eigen::SparseMatrix<double> Phi(s.m, s.n);
  Phi.setFromTriplets(trips.begin(), trips.end());

  const int sparsity = std::max(1, static_cast<int>(std::lround(s.n / 100.0)));
  const auto support = sample_distinct(s.n, sparsity, rng);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(s.n);
  for (int i : support) x0[i] = rng.uniform01() < 0.5 ? -1.0 : 1.0;
  Eigen::VectorXd y = Phi * x0;
  for (int i = 0; i < s.m; ++i) y[i] += s.sigma * rng.normal();
  const double tau = s.tau > 0 ? s.tau : x0.cwiseAbs().sum();

  Instance inst{std::make_unique<QuadraticObjective>(std::move(Phi), std::move(y)),
                std::make_unique<L1Ball>(s.n, tau),
                Atom(AtomKey{}, Eigen::VectorXd{}), {}};
  inst.start = static_cast<const L1Ball&>(*inst.region).vertex(0, +1);
  inst.meta = base_meta("signal", seed);
  inst.meta["params"] = {{"m", s.m},
                         {"n", s.n},
                         {"density", s.density},
                         {"sigma", s.sigma},
                         {"tau", tau}};
  inst.meta["region"] = {{"kind", "l1ball"}, {"n", s.n}, {"tau", tau}};
  inst.meta["start"] = atom_to_json(inst.start);
  inst.meta["notes"] = {{"planted_l1", x0.cwiseAbs().sum()}, {"planted_support", sparsity}};
  return inst;
}

Instance make_structured(const StructuredRegressionSpec& s, std::uint64_t seed) {
  Rng rng(seed);
  std::unique_ptr<Region> region;
  nlohmann::json region_meta;
  if (s.kind == StructuredRegressionSpec::Kind::Birkhoff) {
    region = std::make_unique<Birkhoff>(s.birkhoff_n);
    region_meta = {{"kind", "birkhoff"}, {"n", s.birkhoff_n}};
  } else {
    DagGraph g = s.dag_file ? load_dag(*s.dag_file)
                            : generate_layered_dag(s.dag_layers, s.dag_width, s.dag_skips, rng);
    region = std::make_unique<DagPathRegion>(std::move(g));
    region_meta = {{"kind", "dagpath"},
                   {"layers", s.dag_layers},
                   {"width", s.dag_width},
                   {"skips", s.dag_skips}};
  }
  const auto dim = region->ambient_dim();
  const int m = s.m > 0 ? s.m : static_cast<int>(dim) + 100;

  Eigen::MatrixXd A = gaussian_matrix(m, dim, rng);
  A /= std::sqrt(static_cast<double>(m));

  // Blend of a few vertices, then one coordinate pushed negative: the
  // regression target is infeasible for any nonnegative-coordinate region.
  Eigen::VectorXd x_feas = Eigen::VectorXd::Zero(dim);
  double wsum = 0.0;
  for (int r = 0; r < 5; ++r) {
    const double w = 0.1 + rng.uniform01();
    x_feas += w * region->lmo(gaussian_vector(dim, rng)).coords();
    wsum += w;
  }
  x_feas /= wsum;
  Eigen::Index j0 = 0;
  for (Eigen::Index j = 1; j < dim; ++j)
    if (x_feas[j] > x_feas[j0]) j0 = j;
  Eigen::VectorXd target = x_feas;
  target[j0] = -0.25;
  const Eigen::VectorXd b = A * target;

  Instance inst{std::make_unique<QuadraticObjective>(A, b), std::move(region),
                Atom(AtomKey{}, Eigen::VectorXd{}), {}};
  if (s.kind == StructuredRegressionSpec::Kind::Birkhoff) {
    std::vector<std::int32_t> identity(static_cast<std::size_t>(s.birkhoff_n));
    std::iota(identity.begin(), identity.end(), 0);
    inst.start = static_cast<const Birkhoff&>(*inst.region).vertex(identity);
  } else {
    inst.start = inst.region->lmo(Eigen::VectorXd::Zero(dim));  // canonical path
  }
  inst.meta = base_meta("structured", seed);
  inst.meta["params"] = {
      {"kind", s.kind == StructuredRegressionSpec::Kind::Birkhoff ? "birkhoff" : "dagpath"},
      {"m", m}};
  inst.meta["region"] = region_meta;
  inst.meta["start"] = atom_to_json(inst.start);
  inst.meta["notes"] = {{"target_negative_coordinate", static_cast<long>(j0)},
                        {"f_at_target", 0.0},
                        {"unconstrained_minimizer_outside", true},
                        {"full_rank_regression", m >= dim}};
  return inst;
}

Instance make_simplex_quadratic(const SimplexQuadraticSpec& s, std::uint64_t seed) {
  if (s.k < 3 || !(s.margin > 0))
    throw std::invalid_argument("simplex quadratic spec: need k >= 3 and margin > 0");
  Rng rng(seed);
  // A = Q D with Q orthogonal and singular values on [1, 2]: the Hessian
  // spectrum of ||A x - b||^2 is exactly 2 [1, 4].
  const Eigen::MatrixXd M = gaussian_matrix(s.k, s.k, rng);
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(M).householderQ();
  Eigen::VectorXd d(s.k);
  for (int i = 0; i < s.k; ++i)
    d[i] = 1.0 + static_cast<double>(i) / static_cast<double>(s.k - 1);
  const Eigen::MatrixXd A = Q * d.asDiagonal();

  // Unconstrained minimizer: coordinate 0 at -margin, the rest uniform and
  // summing to 1 + margin, so it is barely outside the simplex and the
  // optimal residual stays small.
  const double u = 1.0 / static_cast<double>(s.k);
  Eigen::VectorXd target =
      Eigen::VectorXd::Constant(s.k, u + (u + s.margin) / static_cast<double>(s.k - 1));
  target[0] = -s.margin;
  const Eigen::VectorXd b = A * target;

  Instance inst{std::make_unique<QuadraticObjective>(A, b), std::make_unique<Simplex>(s.k),
                Atom(AtomKey{}, Eigen::VectorXd{}), {}};
  inst.start = static_cast<const Simplex&>(*inst.region).vertex(0);
  inst.meta = base_meta("simplex", seed);
  inst.meta["params"] = {{"k", s.k}, {"margin", s.margin}};
  inst.meta["region"] = {{"kind", "simplex"}, {"k", s.k}};
  inst.meta["start"] = atom_to_json(inst.start);
  inst.meta["notes"] = {{"minimizer_negative_coordinate", -s.margin},
                        {"unconstrained_minimizer_outside", true}};
  return inst;
}

}  // namespace

Instance generate(const InstanceSpec& spec, std::uint64_t seed) {
  return std::visit(
      [seed](const auto& s) -> Instance {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LassoSpec>) return make_lasso(s, seed);
        if constexpr (std::is_same_v<T, SignalRecoverySpec>) return make_signal(s, seed);
        if constexpr (std::is_same_v<T, StructuredRegressionSpec>)
          return make_structured(s, seed);
        if constexpr (std::is_same_v<T, SimplexQuadraticSpec>)
          return make_simplex_quadratic(s, seed);
      },
      spec);
}

void write_matrix_market(const Eigen::SparseMatrix<double>& A, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      out << it.row() + 1 << " " << it.col() + 1 << " " << fmt17(it.value()) << "\n";
}

Eigen::SparseMatrix<double> read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("read_matrix_market: missing banner");
  if (line.find("coordinate") == std::string::npos || line.find("real") == std::string::npos ||
      line.find("general") == std::string::npos)
    throw std::runtime_error("read_matrix_market: unsupported banner: " + line);
  do {
    if (!std::getline(in, line)) throw std::runtime_error("read_matrix_market: no size line");
  } while (!line.empty() && line[0] == '%');
  std::istringstream ss(line);
  Eigen::Index rows = 0, cols = 0;
  std::size_t nnz = 0;
  ss >> rows >> cols >> nnz;
  if (!ss) throw std::runtime_error("read_matrix_market: malformed size line");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) throw std::runtime_error("read_matrix_market: truncated");
    std::istringstream es(line);
    Eigen::Index i = 0, j = 0;
    double v = 0.0;
    es >> i >> j >> v;
    if (!es) throw std::runtime_error("read_matrix_market: malformed entry");
    trips.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
  }
  Eigen::SparseMatrix<double> A(rows, cols);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

void write_plain_vector(const Eigen::VectorXd& v, std::ostream& out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << fmt17(v[i]) << "\n";
}

Eigen::VectorXd read_plain_vector(std::istream& in) {
  std::vector<double> vals;
  double x = 0.0;
  while (in >> x) vals.push_back(x);
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
  return v;
}

namespace {

Atom rebuild_atom(const Region& region, const std::string& family,
                  const std::vector<std::int32_t>& data) {
  if (family == "coordinate") {
    return static_cast<const Simplex&>(region).vertex(data.at(0));
  }
  if (family == "signed_coordinate") {
    return static_cast<const L1Ball&>(region).vertex(data.at(0), data.at(1));
  }
  if (family == "cube_corner") {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(region.ambient_dim());
    for (std::int32_t i : data) v[i] = 1.0;
    return Atom(AtomKey{AtomFamily::CubeCorner, data}, std::move(v));
  }
  if (family == "permutation") {
    return static_cast<const Birkhoff&>(region).vertex(data);
  }
  if (family == "arcset") {
    return static_cast<const DagPathRegion&>(region).path_atom(data);
  }
  throw std::runtime_error("rebuild_atom: unknown family " + family);
}

}  // namespace

void save_instance(const Instance& inst, const std::string& dir) {
  {
    std::ofstream out(dir + "/A.mtx");
    if (!out) throw std::runtime_error("save_instance: cannot write " + dir + "/A.mtx");
    write_matrix_market(inst.objective->A(), out);
  }
  {
    std::ofstream out(dir + "/b.txt");
    if (!out) throw std::runtime_error("save_instance: cannot write " + dir + "/b.txt");
    write_plain_vector(inst.objective->b(), out);
  }
  nlohmann::json meta = inst.meta;
  meta["files"] = {{"A", "A.mtx"}, {"b", "b.txt"}};
  if (const auto* dp = dynamic_cast<const DagPathRegion*>(inst.region.get())) {
    save_dag(dp->graph(), dir + "/dag.txt");
    meta["files"]["dag"] = "dag.txt";
  }
  std::ofstream out(dir + "/instance.json");
  if (!out) throw std::runtime_error("save_instance: cannot write " + dir + "/instance.json");
  out << meta.dump(2) << "\n";
}

Instance load_instance(const std::string& dir) {
  std::ifstream jin(dir + "/instance.json");
  if (!jin) throw std::runtime_error("load_instance: cannot open " + dir + "/instance.json");
  nlohmann::json meta = nlohmann::json::parse(jin);

  std::ifstream ain(dir + "/A.mtx");
  if (!ain) throw std::runtime_error("load_instance: cannot open " + dir + "/A.mtx");
  Eigen::SparseMatrix<double> A = read_matrix_market(ain);
  std::ifstream bin(dir + "/b.txt");
  if (!bin) throw std::runtime_error("load_instance: cannot open " + dir + "/b.txt");
  Eigen::VectorXd b = read_plain_vector(bin);

  const auto& rj = meta.at("region");
  const std::string kind = rj.at("kind").get<std::string>();
  std::unique_ptr<Region> region;
  if (kind == "simplex") {
    region = std::make_unique<Simplex>(rj.at("k").get<int>());
  } else if (kind == "cube") {
    region = std::make_unique<Cube>(rj.at("n").get<int>());
  } else if (kind == "l1ball") {
    region = std::make_unique<L1Ball>(rj.at("n").get<int>(), rj.at("tau").get<double>());
  } else if (kind == "birkhoff") {
    region = std::make_unique<Birkhoff>(rj.at("n").get<int>());
  } else if (kind == "dagpath") {
    region = std::make_unique<DagPathRegion>(load_dag(dir + "/dag.txt"));
  } else {
    throw std::runtime_error("load_instance: unknown region kind " + kind);
  }

  Instance inst{std::make_unique<QuadraticObjective>(std::move(A), std::move(b)),
                std::move(region), Atom(AtomKey{}, Eigen::VectorXd{}), std::move(meta)};
  const auto& sj = inst.meta.at("start");
  inst.start = rebuild_atom(*inst.region, sj.at("family").get<std::string>(),
                            sj.at("data").get<std::vector<std::int32_t>>());
  return inst;
}

}  // namespace bcg
