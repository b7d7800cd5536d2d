#include "vxf/fitness.hpp"

#include <cmath>

#include "vxf/csv.hpp"
#include "vxf/errors.hpp"

namespace vxf {

namespace {

Index first_non_finite(const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return i;
  }
  return -1;
}

}  // namespace

FitnessResult fitness(const Eigen::Ref<const Matrix>& adj, const FitnessOptions& options,
                      const FitnessObserver& observer) {
  const Index c_count = adj.rows();
  const Index s_count = adj.cols();
  if (c_count == 0 || s_count == 0) {
    throw Error(errc::dimension_mismatch, "empty adjacency matrix");
  }
  if (!(options.tol > 0) || options.max_iter < 1) {
    throw Error(errc::parse_error, "fitness needs tol > 0 and max_iter >= 1");
  }
  if (!adj.allFinite() || adj.minCoeff() < 0) {
    throw Error(errc::non_finite, "adjacency matrix must be finite and non-negative");
  }

  FitnessResult result;
  Vector f = Vector::Ones(c_count);
  Vector q = Vector::Ones(s_count);
  std::vector<bool> floored(static_cast<std::size_t>(c_count), false);

  auto step = [&](const Vector& f_in, const Vector& q_in, bool record_floors) {
    Vector ftil = adj * q_in;
    Vector qtil = (adj.transpose() * f_in.cwiseInverse()).cwiseInverse();

    if (Index bad = first_non_finite(qtil); bad >= 0) {
      throw Error(errc::non_finite,
                  "industry " + std::to_string(bad) +
                      " has no support across countries (division blow-up)",
                  {{"industry_index", std::to_string(bad)}});
    }
    if (Index bad = first_non_finite(ftil); bad >= 0) {
      throw Error(errc::non_finite,
                  "country " + std::to_string(bad) + " produced a non-finite score",
                  {{"country_index", std::to_string(bad)}});
    }

    double f_mean = ftil.mean();
    double q_mean = qtil.mean();
    if (!(f_mean > 0) || !(q_mean > 0) || !std::isfinite(f_mean) || !std::isfinite(q_mean)) {
      throw Error(errc::non_finite, "score normalization degenerated (mean " +
                                        csv::format_double(f_mean) + " / " +
                                        csv::format_double(q_mean) + ")");
    }
    Vector f_next = ftil / f_mean;
    Vector q_next = qtil / q_mean;
    for (Index c = 0; c < c_count; ++c) {
      if (f_next[c] < options.underflow_floor) {
        f_next[c] = options.underflow_floor;
        if (record_floors) floored[static_cast<std::size_t>(c)] = true;
      }
    }
    return std::make_pair(std::move(f_next), std::move(q_next));
  };

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    auto [f_next, q_next] = step(f, q, true);
    double delta = std::max((f_next - f).cwiseAbs().maxCoeff(),
                            (q_next - q).cwiseAbs().maxCoeff());
    f.swap(f_next);
    q.swap(q_next);
    result.iterations = iter;
    result.final_delta = delta;
    if (observer) observer(iter, f, q);
    if (delta < options.tol) {
      // Accept only if a further step also stays within tol; the max-norm
      // contraction is not monotone on slow-mixing matrices.
      auto [f_peek, q_peek] = step(f, q, false);
      double peek = std::max((f_peek - f).cwiseAbs().maxCoeff(),
                             (q_peek - q).cwiseAbs().maxCoeff());
      if (peek < options.tol) {
        result.converged = true;
        break;
      }
    }
  }

  result.fitness = std::move(f);
  result.industry_complexity = std::move(q);
  for (Index c = 0; c < c_count; ++c) {
    if (floored[static_cast<std::size_t>(c)]) result.floored_countries.push_back(c);
  }
  return result;
}

}  // namespace vxf
