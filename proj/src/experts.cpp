#include "uoco/experts.hpp"

#include <algorithm>
#include <cmath>

#include "uoco/linalg.hpp"

namespace uoco {

std::string to_string(ExpertKind kind) {
  switch (kind) {
    case ExpertKind::kCvx: return "cvx";
    case ExpertKind::kCvxSmooth: return "cvx-smooth";
    case ExpertKind::kExp: return "exp";
    case ExpertKind::kSc: return "sc";
    case ExpertKind::kScSmooth: return "sc-smooth";
  }
  return "unknown";
}

double ExpertConfig::beta_hat() const {
  return 0.5 * std::min(1.0 / (4.0 * G * D), modulus);
}

void ExpertConfig::validate() const {
  if (!(G > 0.0) || !(D > 0.0)) throw ConfigError("expert needs G > 0 and D > 0");
  if (horizon < 1) throw ConfigError("expert horizon must be positive");
  if (kind == ExpertKind::kExp || kind == ExpertKind::kSc || kind == ExpertKind::kScSmooth) {
    const double lo = 1.0 / static_cast<double>(horizon);
    if (!(modulus >= lo * (1.0 - 1e-12) && modulus <= 1.0)) {
      throw ConfigError("expert modulus must lie in [1/T, 1]");
    }
  }
}

ExpertState expert_init(const ExpertConfig& config, int dimension) {
  config.validate();
  ExpertState state;
  state.y = Vector::Zero(dimension);
  if (config.kind == ExpertKind::kExp) {
    const double b = config.beta_hat();
    state.sigma = Matrix::Identity(dimension, dimension) / (b * b * config.D * config.D);
  }
  return state;
}

Vector ons_closed_form_projection(const Matrix& sigma, const Vector& target, double beta,
                            double radius) {
  const Eigen::Index d = sigma.rows();
  const double base = 1.0 / (beta * beta * radius * radius);
  const SymmetricEigen eig = jacobi_eigen(sigma - base * Matrix::Identity(d, d));
  const Vector shifted = (eig.values.array() + 4.0 * beta * radius * radius).inverse().matrix();
  return eig.vectors * shifted.asDiagonal() * eig.vectors.transpose() * (sigma * target);
}

namespace {

Vector finish_step(const Vector& candidate, double radius, const Domain* feasible) {
  if (feasible != nullptr) return feasible->project(candidate);
  return project_to_ball(candidate, radius);
}

}  // namespace

ExpertState expert_update(const ExpertState& state, const ExpertConfig& config,
                          const SurrogateContext& ctx, const Vector& surr_grad,
                          const Domain* feasible) {
  ExpertState next = state;
  const double t = static_cast<double>(state.t);
  const double D = config.D;
  const double G = config.G;
  const Vector& y = state.y;

  switch (config.kind) {
    case ExpertKind::kCvx: {
      next.y = finish_step(y - surr_grad / std::sqrt(t), D, feasible);
      break;
    }
    case ExpertKind::kSc: {
      const double lambda = config.modulus;
      const Vector grad = surr_grad + lambda * (y - ctx.x);
      next.y = finish_step(y - grad / (lambda * t), D, feasible);
      break;
    }
    case ExpertKind::kExp: {
      const double beta = config.beta_hat();
      const Vector grad = surr_grad * (1.0 + beta * surr_grad.dot(y - ctx.y));
      next.sigma.noalias() += grad * grad.transpose();
      Eigen::LLT<Matrix> llt(next.sigma);
      if (llt.info() != Eigen::Success) {
        throw SingularMatrix("ONS matrix lost positive definiteness");
      }
      const Vector candidate = y - llt.solve(grad) / beta;
      Vector in_ball;
      if (candidate.norm() <= D) {
        in_ball = candidate;
      } else if (config.ons_projection == OnsProjection::kExact) {
        in_ball = sigma_ball_projection(next.sigma, candidate, D);
      } else {
        in_ball = project_to_ball(ons_closed_form_projection(next.sigma, candidate, beta, D), D);
      }
      next.y = feasible != nullptr ? feasible->project(in_ball) : in_ball;
      break;
    }
    case ExpertKind::kCvxSmooth: {
      next.cumulative_sq += surr_grad.squaredNorm();
      const double alpha = D / std::sqrt(2.0);
      const double delta = G * G;
      const double eta = alpha / std::sqrt(delta + next.cumulative_sq);
      next.y = finish_step(y - eta * surr_grad, D, feasible);
      break;
    }
    case ExpertKind::kScSmooth: {
      const double lambda = config.modulus;
      const double g2 = surr_grad.squaredNorm();
      next.cumulative_sq += g2;
      const double scale = 1.0 + 2.0 * D / G;
      const double inverse_step = scale * scale + (lambda / (G * G)) * next.cumulative_sq;
      const Vector grad = surr_grad + (lambda / (G * G)) * g2 * (y - ctx.x);
      next.y = finish_step(y - grad / inverse_step, D, feasible);
      break;
    }
  }
  next.t = state.t + 1;
  return next;
}

double expert_loss_value(const ExpertConfig& config, const SurrogateContext& ctx,
                         const Vector& surr_grad, const Vector& y) {
  const double linear = surr_grad.dot(y - ctx.y);
  switch (config.kind) {
    case ExpertKind::kCvx:
    case ExpertKind::kCvxSmooth:
      return linear;
    case ExpertKind::kExp:
      return linear + 0.5 * config.beta_hat() * linear * linear;
    case ExpertKind::kSc:
      return linear + 0.5 * config.modulus * (y - ctx.x).squaredNorm();
    case ExpertKind::kScSmooth:
      return linear + 0.5 * config.modulus / (config.G * config.G) * surr_grad.squaredNorm() *
                          (y - ctx.x).squaredNorm();
  }
  return linear;
}

Vector expert_loss_grad(const ExpertConfig& config, const SurrogateContext& ctx,
                        const Vector& surr_grad, const Vector& y) {
  switch (config.kind) {
    case ExpertKind::kCvx:
    case ExpertKind::kCvxSmooth:
      return surr_grad;
    case ExpertKind::kExp:
      return surr_grad * (1.0 + config.beta_hat() * surr_grad.dot(y - ctx.y));
    case ExpertKind::kSc:
      return surr_grad + config.modulus * (y - ctx.x);
    case ExpertKind::kScSmooth:
      return surr_grad + config.modulus / (config.G * config.G) * surr_grad.squaredNorm() *
                             (y - ctx.x);
  }
  return surr_grad;
}

}  // namespace uoco
