#include "idlearn/witness.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "idlearn/error.hpp"
#include "idlearn/rng.hpp"
#include "idlearn/verify.hpp"

namespace idlearn {

namespace {

class LogitNet {
 public:
  explicit LogitNet(std::vector<NetNode> shape) : shape_(std::move(shape)) {}

  Eigen::VectorXd logits() const {
    std::vector<double> out;
    for (const auto& n : shape_) {
      for (double p : n.cpt) out.push_back(std::log(p));
    }
    return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
  }

  CausalBayesNet net(const Eigen::VectorXd& theta) const {
    std::vector<NetNode> nodes = shape_;
    Eigen::Index at = 0;
    for (auto& n : nodes) {
      for (std::size_t r = 0; r < n.cpt.size(); r += n.cardinality) {
        double hi = -INFINITY;
        for (int k = 0; k < n.cardinality; ++k) hi = std::max(hi, theta[at + k]);
        double sum = 0.0;
        for (int k = 0; k < n.cardinality; ++k) {
          n.cpt[r + k] = std::exp(theta[at + k] - hi);
          sum += n.cpt[r + k];
        }
        for (int k = 0; k < n.cardinality; ++k) n.cpt[r + k] /= sum;
        at += n.cardinality;
      }
    }
    return CausalBayesNet::build(std::move(nodes));
  }

  Eigen::VectorXd observe(const Eigen::VectorXd& theta) const {
    PmfTable t = exact_observational(net(theta));
    return Eigen::Map<Eigen::VectorXd>(t.probs().data(), static_cast<Eigen::Index>(t.size()));
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& theta) const {
    constexpr double h = 1e-6;
    const Eigen::VectorXd f0 = observe(theta);
    Eigen::MatrixXd j(f0.size(), theta.size());
    Eigen::VectorXd t = theta;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      t[i] = theta[i] + h;
      const Eigen::VectorXd up = observe(t);
      t[i] = theta[i] - h;
      const Eigen::VectorXd down = observe(t);
      t[i] = theta[i];
      j.col(i) = (up - down) / (2.0 * h);
    }
    return j;
  }

 private:
  std::vector<NetNode> shape_;
};

double gaussian(Rng& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

std::optional<WitnessPair> find_indistinguishable_pair(const Admg& g, const Assignment& x,
                                                       std::uint64_t seed,
                                                       const WitnessOptions& options) {
  Rng rng(seed);
  for (int attempt = 0; attempt < options.attempts; ++attempt) {
    RandomNetOptions ro;
    ro.seed = rng.next();
    ro.gamma = 0.05;
    ro.hidden_cardinality = options.hidden_cardinality;
    const CausalBayesNet start = random_net(g, ro);
    const LogitNet shape(start.nodes());
    const Eigen::VectorXd theta0 = shape.logits();
    const Eigen::VectorXd target = shape.observe(theta0);

    Eigen::VectorXd dir(theta0.size());
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = gaussian(rng);
    const Eigen::MatrixXd j0 = shape.jacobian(theta0);
    dir -= j0.completeOrthogonalDecomposition().solve(j0 * dir);
    if (dir.norm() < 1e-9) continue;
    const double step = options.step * (1.0 + attempt / 4);
    Eigen::VectorXd theta = theta0 + step * dir / dir.norm();

    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      const Eigen::VectorXd res = shape.observe(theta) - target;
      if (res.lpNorm<Eigen::Infinity>() < 1e-14) {
        converged = true;
        break;
      }
      const Eigen::MatrixXd j = shape.jacobian(theta);
      theta -= j.completeOrthogonalDecomposition().solve(res);
      if (!theta.allFinite()) break;
    }
    if (!converged) continue;

    WitnessPair out{start, shape.net(theta), 0.0, 0.0};
    out.observational_tv = exact_tv(exact_observational(out.first), exact_observational(out.second));
    out.interventional_tv =
        exact_tv(exact_interventional(out.first, x), exact_interventional(out.second, x));
    if (out.observational_tv <= options.observational_tol &&
        out.interventional_tv >= options.min_gap) {
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace idlearn
