#include "lpstab/objectives.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lpstab {

Dataset Dataset::make(std::vector<Sample> samples) {
  if (samples.empty()) throw std::invalid_argument("Dataset: empty");
  Dataset d;
  d.dim = static_cast<int>(samples.front().features.size());
  for (const auto& s : samples) {
    if (s.features.size() != d.dim) {
      throw std::invalid_argument("Dataset: inconsistent dimensions");
    }
    if (!s.features.allFinite()) {
      throw std::invalid_argument("Dataset: non-finite features");
    }
  }
  d.samples = std::move(samples);
  return d;
}

double LossModel::link(double t) const {
  switch (kind) {
    case LossKind::GlmLogistic:
      // log(1 + exp(-t)) computed without overflow for large |t|
      return t > 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
    case LossKind::GlmSquared:
      return (1.0 - t) * (1.0 - t);
    case LossKind::GlmSmoothedHinge:
      if (t >= 1.0) return 0.0;
      if (t >= 0.0) return 0.5 * (1.0 - t) * (1.0 - t);
      return 0.5 - t;
    case LossKind::Linear:
      break;
  }
  throw std::logic_error("LossModel::link: linear variant has no link");
}

double LossModel::link_grad(double t) const {
  switch (kind) {
    case LossKind::GlmLogistic:
      return -1.0 / (1.0 + std::exp(t));
    case LossKind::GlmSquared:
      return -2.0 * (1.0 - t);
    case LossKind::GlmSmoothedHinge:
      if (t >= 1.0) return 0.0;
      if (t >= 0.0) return t - 1.0;
      return -1.0;
    case LossKind::Linear:
      break;
  }
  throw std::logic_error("LossModel::link_grad: linear variant has no link");
}

double LossModel::link_hess(double t) const {
  switch (kind) {
    case LossKind::GlmLogistic: {
      const double s = 1.0 / (1.0 + std::exp(-t));
      return s * (1.0 - s);
    }
    case LossKind::GlmSquared:
      return 2.0;
    case LossKind::GlmSmoothedHinge:
      return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
    case LossKind::Linear:
      break;
  }
  throw std::logic_error("LossModel::link_hess: linear variant has no link");
}

double LossModel::link_smoothness() const {
  switch (kind) {
    case LossKind::GlmLogistic:
      return 0.25;
    case LossKind::GlmSquared:
      return 2.0;
    case LossKind::GlmSmoothedHinge:
      return 1.0;
    case LossKind::Linear:
      return 0.0;
  }
  return 0.0;
}

std::pair<double, Vector> LossModel::eval(const Vector& x,
                                          const Sample& z) const {
  if (!x.allFinite()) throw std::domain_error("loss_eval: non-finite point");
  if (kind == LossKind::Linear) {
    return {linear_scale * x.dot(z.features), linear_scale * z.features};
  }
  if (z.label != 1.0 && z.label != -1.0) {
    throw std::invalid_argument("loss_eval: GLM label must be +-1");
  }
  const double t = z.label * z.features.dot(x);
  return {link(t), link_grad(t) * z.label * z.features};
}

std::pair<double, Vector> loss_eval(const LossModel& loss, const Vector& x,
                                    const Sample& z) {
  return loss.eval(x, z);
}

std::pair<double, Vector> empirical_risk(const Dataset& data,
                                         const LossModel& loss,
                                         const Vector& x) {
  if (data.samples.empty()) throw std::invalid_argument("empirical_risk: empty");
  double value = 0.0;
  Vector grad = Vector::Zero(x.size());
  for (const auto& z : data.samples) {
    auto [v, g] = loss.eval(x, z);
    value += v;
    grad += g;
  }
  const double inv_n = 1.0 / static_cast<double>(data.samples.size());
  return {value * inv_n, grad * inv_n};
}

RegularizedErm::RegularizedErm(Dataset data, LossModel loss, BallDomain domain,
                               Regularizer regularizer, double loss_smoothness)
    : dataset_(std::move(data)),
      loss_(loss),
      domain_(std::move(domain)),
      regularizer_(std::move(regularizer)) {
  if ((regularizer_.center - domain_.center).norm() > 1e-12) {
    throw std::invalid_argument(
        "RegularizedErm: regularizer and domain centers differ");
  }
  range_D_ = regularizer_range_D(domain_, regularizer_);
  const double p = regularizer_.geometry.effective_p;
  // local smoothness of the regularizer inside the ball (p >= 2 branch);
  // for p in (1,2) the psi term is Hoelder smooth and contributes no
  // quadratic modulus, the backtracking line search absorbs it
  double reg_smooth = 0.0;
  if (p >= 2.0) {
    reg_smooth = regularizer_.alpha * regularizer_.cbar * (p - 1.0) *
                 std::pow(2.0 * domain_.radius, p - 2.0);
  }
  declared_smoothness_ = loss_smoothness + reg_smooth;
  if (declared_smoothness_ <= 0.0) declared_smoothness_ = 1.0;
}

double RegularizedErm::value(const Vector& x) const {
  return empirical_risk(dataset_, loss_, x).first + regularizer_.value(x);
}

Vector RegularizedErm::gradient(const Vector& x) const {
  return empirical_risk(dataset_, loss_, x).second + regularizer_.gradient(x);
}

std::pair<double, Vector> RegularizedErm::eval(const Vector& x) const {
  auto [v, g] = empirical_risk(dataset_, loss_, x);
  auto [rv, rg] = regularizer_.eval(x);
  return {v + rv, g + rg};
}

std::pair<double, Vector> RegularizedErm::empirical(const Vector& x) const {
  return empirical_risk(dataset_, loss_, x);
}

double lipschitz_from_smoothness(double L, double R) {
  if (L < 0.0 || R < 0.0) {
    throw std::invalid_argument("lipschitz_from_smoothness: negative input");
  }
  return 2.0 * L * R;
}

double glm_smoothness_bound(const Dataset& data, double link_L, double p,
                            double data_radius) {
  const double ps = dual_exponent(p);
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const double a = pnorm(data.samples[i].features, ps);
    if (a > data_radius * (1.0 + 1e-12)) {
      throw std::invalid_argument("glm_smoothness_bound: sample " +
                                  std::to_string(i) +
                                  " exceeds the declared data radius");
    }
  }
  return link_L * data_radius * data_radius;
}

double regularizer_range_D(const BallDomain& ball, const Regularizer& reg) {
  if ((reg.center - ball.center).norm() > 1e-12) {
    throw std::invalid_argument("regularizer_range_D: centers differ");
  }
  const double p = reg.geometry.effective_p;
  return std::pow(reg.cbar / p, 1.0 / p) * ball.radius;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw std::invalid_argument("read_dataset_csv: empty stream");
  }
  const auto cols = split_csv_line(header);
  if (cols.empty()) throw std::invalid_argument("read_dataset_csv: bad header");
  const bool glm = cols.front() == "b";
  const int dim = static_cast<int>(cols.size()) - (glm ? 1 : 0);
  if (dim < 1 || (!glm && cols.front().rfind("z_", 0) != 0)) {
    throw std::invalid_argument("read_dataset_csv: unrecognized header");
  }

  std::vector<Sample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != dim + (glm ? 1 : 0)) {
      throw std::invalid_argument("read_dataset_csv: row width mismatch");
    }
    Sample s;
    s.features.resize(dim);
    std::size_t off = 0;
    if (glm) {
      s.label = std::stod(cells[0]);
      if (s.label != 1.0 && s.label != -1.0) {
        throw std::invalid_argument("read_dataset_csv: label outside {-1,+1}");
      }
      off = 1;
    }
    for (int j = 0; j < dim; ++j) {
      s.features[j] = std::stod(cells[off + static_cast<std::size_t>(j)]);
    }
    samples.push_back(std::move(s));
  }
  return Dataset::make(std::move(samples));
}

Dataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dataset file: " + path);
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data, bool glm) {
  if (glm) {
    out << "b";
    for (int j = 1; j <= data.dim; ++j) out << ",a_" << j;
  } else {
    for (int j = 1; j <= data.dim; ++j) out << (j == 1 ? "" : ",") << "z_" << j;
  }
  out << "\n";
  for (const auto& s : data.samples) {
    if (glm) out << s.label;
    for (int j = 0; j < data.dim; ++j) {
      if (glm || j > 0) out << ",";
      out << s.features[j];
    }
    out << "\n";
  }
}

}  // namespace lpstab
