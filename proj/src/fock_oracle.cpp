#include "homlo/fock_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "homlo/errors.hpp"

namespace homlo::fock {

namespace {

std::size_t checked_power(int base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (out > (std::size_t{1} << 40) / static_cast<std::size_t>(base))
      throw InvalidParameter("Fock space too large");
    out *= static_cast<std::size_t>(base);
  }
  return out;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Amplitudes <p, s-p| U |na, nb> of the splitter, indexed by p = photons left in mode a.
std::vector<std::vector<std::vector<double>>> splitter_table(int cutoff, double t) {
  const double st = std::sqrt(t);
  const double sr = std::sqrt(1.0 - t);
  std::vector<std::vector<std::vector<double>>> table(cutoff + 1, std::vector<std::vector<double>>(cutoff + 1));
  for (int na = 0; na <= cutoff; ++na) {
    for (int nb = 0; nb <= cutoff; ++nb) {
      const int s = na + nb;
      std::vector<double> coeff(s + 1, 0.0);
      for (int i = 0; i <= na; ++i) {
        for (int j = 0; j <= nb; ++j) {
          const int p = i + j;
          const int q = s - p;
          const double log_binom = log_factorial(na) - log_factorial(i) - log_factorial(na - i) +
                                   log_factorial(nb) - log_factorial(j) - log_factorial(nb - j);
          const double log_norm =
              0.5 * (log_factorial(p) + log_factorial(q) - log_factorial(na) - log_factorial(nb));
          const double mag = std::exp(log_binom + log_norm) * std::pow(st, i + nb - j) * std::pow(sr, na - i + j);
          coeff[p] += (j % 2 == 0) ? mag : -mag;
        }
      }
      table[na][nb] = std::move(coeff);
    }
  }
  return table;
}

// Renormalize in place, returning the squared norm that was missing.
double renormalize(Eigen::VectorXcd& v) {
  const double n2 = v.squaredNorm();
  if (n2 > 0.0) v /= std::sqrt(n2);
  return std::max(0.0, 1.0 - n2);
}

}  // namespace

std::string to_string(ModeLabel label) {
  std::string out;
  switch (label.spatial) {
    case Spatial::in_a: out = "in_a"; break;
    case Spatial::in_b: out = "in_b"; break;
    case Spatial::out_2: out = "out_2"; break;
    case Spatial::out_3: out = "out_3"; break;
    case Spatial::env: out = "env"; break;
  }
  return out + (label.pol == Polarization::parallel ? "/par" : "/perp");
}

MultimodeState::MultimodeState(std::vector<ModeLabel> modes, int cutoff, std::vector<Branch> branches)
    : modes_(std::move(modes)), cutoff_(cutoff), branches_(std::move(branches)) {
  if (cutoff_ < 0) throw InvalidParameter("cutoff must be non-negative");
  for (std::size_t i = 0; i < modes_.size(); ++i)
    for (std::size_t j = i + 1; j < modes_.size(); ++j)
      if (modes_[i] == modes_[j]) throw InvalidParameter("duplicate mode " + to_string(modes_[i]));
  dimension_ = checked_power(cutoff_ + 1, modes_.size());
  for (const auto& b : branches_)
    if (static_cast<std::size_t>(b.amplitudes.size()) != dimension_)
      throw InvalidParameter("branch dimension does not match modes and cutoff");
}

MultimodeState MultimodeState::fock(ModeLabel mode, int n, int cutoff) {
  if (n < 0 || n > cutoff) throw InvalidParameter("Fock number outside the truncated space");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cutoff + 1);
  v[n] = 1.0;
  return MultimodeState({mode}, cutoff, {{1.0, std::move(v)}});
}

MultimodeState MultimodeState::vacuum(std::vector<ModeLabel> modes, int cutoff) {
  const std::size_t dim = checked_power(cutoff + 1, modes.size());
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  v[0] = 1.0;
  return MultimodeState(std::move(modes), cutoff, {{1.0, std::move(v)}});
}

std::size_t MultimodeState::mode_index(ModeLabel mode) const {
  const auto it = std::find(modes_.begin(), modes_.end(), mode);
  if (it == modes_.end()) throw InvalidParameter("unknown mode " + to_string(mode));
  return static_cast<std::size_t>(it - modes_.begin());
}

bool MultimodeState::has_mode(ModeLabel mode) const {
  return std::find(modes_.begin(), modes_.end(), mode) != modes_.end();
}

std::size_t MultimodeState::stride(std::size_t mode_slot) const {
  std::size_t s = 1;
  for (std::size_t k = mode_slot + 1; k < modes_.size(); ++k) s *= static_cast<std::size_t>(cutoff_ + 1);
  return s;
}

int MultimodeState::occupation(std::size_t flat_index, std::size_t mode_slot) const {
  return static_cast<int>((flat_index / stride(mode_slot)) % static_cast<std::size_t>(cutoff_ + 1));
}

double MultimodeState::trace() const {
  double t = 0.0;
  for (const auto& b : branches_) t += b.weight * b.amplitudes.squaredNorm();
  return t;
}

Eigen::MatrixXcd MultimodeState::density_matrix(std::size_t max_dimension) const {
  if (dimension_ > max_dimension)
    throw InvalidParameter("density matrix of dimension " + std::to_string(dimension_) + " exceeds limit");
  const auto n = static_cast<Eigen::Index>(dimension_);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& b : branches_) rho += b.weight * b.amplitudes * b.amplitudes.adjoint();
  return rho;
}

std::vector<double> MultimodeState::number_distribution() const {
  std::vector<double> p(dimension_, 0.0);
  for (const auto& b : branches_)
    for (std::size_t i = 0; i < dimension_; ++i) p[i] += b.weight * std::norm(b.amplitudes[static_cast<Eigen::Index>(i)]);
  return p;
}

void MultimodeState::compact() {
  std::vector<Branch> merged;
  for (auto& b : branches_) {
    if (!(b.weight > 0.0)) continue;
    auto same = std::find_if(merged.begin(), merged.end(), [&](const Branch& m) { return m.amplitudes == b.amplitudes; });
    if (same != merged.end())
      same->weight += b.weight;
    else
      merged.push_back(std::move(b));
  }
  branches_ = std::move(merged);
}

TruncationReport truncation_report(double mu_alpha, int cutoff) {
  if (!(mu_alpha >= 0.0)) throw InvalidParameter("mu_alpha must be non-negative");
  if (cutoff < 0) throw InvalidParameter("cutoff must be non-negative");
  if (mu_alpha == 0.0) return {cutoff, 0.0};
  // Sum the discarded terms directly; 1 - (kept mass) cancels catastrophically.
  double log_term = -mu_alpha + (cutoff + 1) * std::log(mu_alpha) - log_factorial(cutoff + 1);
  double tail = 0.0;
  for (int n = cutoff + 1; n < cutoff + 2000; ++n) {
    const double term = std::exp(log_term);
    tail += term;
    if (n > mu_alpha && term < 1e-18 * tail) break;
    log_term += std::log(mu_alpha) - std::log(static_cast<double>(n + 1));
  }
  return {cutoff, tail};
}

int recommended_cutoff(double mu_alpha, double tolerance, int margin) {
  int n = 0;
  while (truncation_report(mu_alpha, n).tail_mass >= tolerance) ++n;
  return std::max(n + margin, 2);
}

MultimodeState build_qd_state(double p1, double p2, int cutoff, ModeLabel mode) {
  if (!(p1 >= 0.0) || !(p2 >= 0.0) || p1 + p2 > 1.0 + 1e-15)
    throw InvalidParameter("emission probabilities must satisfy p1, p2 >= 0 and p1 + p2 <= 1");
  if (cutoff < 2) throw InvalidParameter("cutoff must hold two photons");
  const double p0 = std::max(0.0, 1.0 - p1 - p2);
  std::vector<MultimodeState::Branch> branches;
  const double weights[3] = {p0, p1, p2};
  for (int n = 0; n < 3; ++n) {
    if (weights[n] <= 0.0) continue;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cutoff + 1);
    v[n] = 1.0;
    branches.push_back({weights[n], std::move(v)});
  }
  return MultimodeState({mode}, cutoff, std::move(branches));
}

Displacement displacement_matrix(Complex alpha, int cutoff) {
  if (cutoff < 0) throw InvalidParameter("cutoff must be non-negative");
  const int d = cutoff + 1;
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    gen(n + 1, n) = alpha * s;             // alpha a^dagger
    gen(n, n + 1) = -std::conj(alpha) * s;  // -conj(alpha) a
  }
  Displacement out;
  out.matrix = gen.exp();
  out.truncation = truncation_report(std::norm(alpha), cutoff);
  out.unitarity_deviation =
      (out.matrix.adjoint() * out.matrix - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
  return out;
}

MultimodeState apply_single_mode(const MultimodeState& state, ModeLabel mode, const Eigen::MatrixXcd& op) {
  const std::size_t slot = state.mode_index(mode);
  const int d = state.cutoff_ + 1;
  if (op.rows() != d || op.cols() != d) throw InvalidParameter("operator dimension does not match cutoff");
  const std::size_t s = state.stride(slot);
  const std::size_t block = s * static_cast<std::size_t>(d);
  MultimodeState out = state;
  Eigen::VectorXcd column(d);
  for (auto& b : out.branches_) {
    const Eigen::VectorXcd in = b.amplitudes;
    for (std::size_t o = 0; o < state.dimension_; o += block) {
      for (std::size_t i = 0; i < s; ++i) {
        bool any = false;
        for (int n = 0; n < d; ++n) {
          column[n] = in[static_cast<Eigen::Index>(o + n * s + i)];
          any = any || column[n] != Complex{};
        }
        if (!any) continue;
        const Eigen::VectorXcd mapped = op * column;
        for (int n = 0; n < d; ++n) b.amplitudes[static_cast<Eigen::Index>(o + n * s + i)] = mapped[n];
      }
    }
    out.truncation_loss_ += b.weight * renormalize(b.amplitudes);
  }
  return out;
}

MultimodeState apply_beam_splitter(const MultimodeState& state, ModeLabel a, ModeLabel b, double t,
                                   ModeLabel out_a, ModeLabel out_b) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidParameter("splitter transmission must lie in [0, 1]");
  const std::size_t ka = state.mode_index(a);
  const std::size_t kb = state.mode_index(b);
  if (ka == kb) throw InvalidParameter("splitter needs two distinct modes");
  const int cutoff = state.cutoff_;
  const std::size_t sa = state.stride(ka);
  const std::size_t sb = state.stride(kb);
  const auto table = splitter_table(cutoff, t);

  std::vector<ModeLabel> labels = state.modes_;
  labels[ka] = out_a;
  labels[kb] = out_b;
  MultimodeState out(labels, cutoff, {});
  out.truncation_loss_ = state.truncation_loss_;
  for (const auto& br : state.branches_) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(state.dimension_));
    for (std::size_t idx = 0; idx < state.dimension_; ++idx) {
      const Complex amp = br.amplitudes[static_cast<Eigen::Index>(idx)];
      if (amp == Complex{}) continue;
      const int na = state.occupation(idx, ka);
      const int nb = state.occupation(idx, kb);
      const std::size_t base = idx - na * sa - nb * sb;
      const auto& coeff = table[na][nb];
      const int total = na + nb;
      for (int p = std::max(0, total - cutoff); p <= std::min(total, cutoff); ++p)
        v[static_cast<Eigen::Index>(base + p * sa + (total - p) * sb)] += coeff[p] * amp;
    }
    out.truncation_loss_ += br.weight * renormalize(v);
    out.branches_.push_back({br.weight, std::move(v)});
  }
  return out;
}

MultimodeState partial_trace(const MultimodeState& state, ModeLabel mode) {
  const std::size_t k = state.mode_index(mode);
  std::vector<ModeLabel> labels = state.modes_;
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(k));
  MultimodeState out(labels, state.cutoff_, {});
  out.truncation_loss_ = state.truncation_loss_;
  const std::size_t d = static_cast<std::size_t>(state.cutoff_ + 1);
  const std::size_t s = state.stride(k);
  const std::size_t reduced = out.dimension_;
  for (const auto& br : state.branches_) {
    for (std::size_t e = 0; e < d; ++e) {
      Eigen::VectorXcd sub(static_cast<Eigen::Index>(reduced));
      for (std::size_t idx = 0; idx < reduced; ++idx) {
        const std::size_t hi = idx / s;
        const std::size_t lo = idx % s;
        sub[static_cast<Eigen::Index>(idx)] = br.amplitudes[static_cast<Eigen::Index>(hi * d * s + e * s + lo)];
      }
      const double n2 = sub.squaredNorm();
      if (!(n2 > 0.0)) continue;
      sub /= std::sqrt(n2);
      out.branches_.push_back({br.weight * n2, std::move(sub)});
    }
  }
  out.compact();
  return out;
}

MultimodeState tensor(const MultimodeState& lhs, const MultimodeState& rhs) {
  if (lhs.cutoff_ != rhs.cutoff_) throw InvalidParameter("tensor product needs equal cutoffs");
  std::vector<ModeLabel> labels = lhs.modes_;
  labels.insert(labels.end(), rhs.modes_.begin(), rhs.modes_.end());
  MultimodeState out(labels, lhs.cutoff_, {});
  out.truncation_loss_ = lhs.truncation_loss_ + rhs.truncation_loss_;
  for (const auto& l : lhs.branches_) {
    for (const auto& r : rhs.branches_) {
      Eigen::VectorXcd v(static_cast<Eigen::Index>(out.dimension_));
      const auto nr = r.amplitudes.size();
      for (Eigen::Index i = 0; i < l.amplitudes.size(); ++i) v.segment(i * nr, nr) = l.amplitudes[i] * r.amplitudes;
      out.branches_.push_back({l.weight * r.weight, std::move(v)});
    }
  }
  return out;
}

MultimodeState mixture(const MultimodeState& lhs, double w, const MultimodeState& rhs) {
  if (lhs.modes_ != rhs.modes_ || lhs.cutoff_ != rhs.cutoff_)
    throw InvalidParameter("mixture needs identical mode layouts");
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidParameter("mixture weight must lie in [0, 1]");
  MultimodeState out(lhs.modes_, lhs.cutoff_, {});
  out.truncation_loss_ = w * lhs.truncation_loss_ + (1.0 - w) * rhs.truncation_loss_;
  for (const auto& b : lhs.branches_) out.branches_.push_back({w * b.weight, b.amplitudes});
  for (const auto& b : rhs.branches_) out.branches_.push_back({(1.0 - w) * b.weight, b.amplitudes});
  out.compact();
  return out;
}

MultimodeState apply_loss(const MultimodeState& state, ModeLabel mode, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in [0, 1]");
  state.mode_index(mode);
  const ModeLabel env{Spatial::env, mode.pol};
  if (state.has_mode(env)) throw InvalidParameter("environment mode already in use");
  auto joint = tensor(state, MultimodeState::vacuum({env}, state.cutoff()));
  joint = apply_beam_splitter(joint, mode, env, eta, mode, env);
  return partial_trace(joint, env);
}

MultimodeState mix_on_beam_splitter(const SourceParams& source, const LocalOscillator& lo,
                                    const BeamSplitterSpec& bs, int cutoff) {
  source.validate();
  lo.validate();
  if (cutoff < 2) throw InvalidParameter("cutoff must hold two photons");
  const auto report = truncation_report(lo.mu_alpha, cutoff);
  if (report.tail_mass >= 1e-6)
    throw TruncationError("cutoff " + std::to_string(cutoff) + " leaves coherent tail mass " +
                          std::to_string(report.tail_mass));

  const ModeLabel a_par{Spatial::in_a, Polarization::parallel};
  const ModeLabel a_perp{Spatial::in_a, Polarization::perpendicular};
  const ModeLabel b_par{Spatial::in_b, Polarization::parallel};
  const ModeLabel b_perp{Spatial::in_b, Polarization::perpendicular};

  auto run = [&](double theta) {
    auto qd = apply_loss(build_qd_state(source.p1, source.p2, cutoff, a_par), a_par, source.eta);
    const double alpha = std::sqrt(lo.mu_alpha);
    auto lo_par = apply_single_mode(MultimodeState::vacuum({b_par}, cutoff), b_par,
                                    displacement_matrix(alpha * std::cos(theta), cutoff).matrix);
    auto lo_perp = apply_single_mode(MultimodeState::vacuum({b_perp}, cutoff), b_perp,
                                     displacement_matrix(alpha * std::sin(theta), cutoff).matrix);
    auto state = tensor(tensor(tensor(qd, MultimodeState::vacuum({a_perp}, cutoff)), lo_par), lo_perp);
    state = apply_beam_splitter(state, a_par, b_par, bs.T(), {Spatial::out_3, Polarization::parallel},
                                {Spatial::out_2, Polarization::parallel});
    return apply_beam_splitter(state, a_perp, b_perp, bs.T(), {Spatial::out_3, Polarization::perpendicular},
                               {Spatial::out_2, Polarization::perpendicular});
  };

  if (source.m_psi >= 1.0) return run(lo.theta);
  return mixture(run(lo.theta), source.m_psi, run(std::numbers::pi / 2.0));
}

namespace {

// Slots of the modes belonging to an output port.
std::vector<std::size_t> port_slots(const MultimodeState& state, Spatial port) {
  std::vector<std::size_t> slots;
  for (std::size_t k = 0; k < state.modes().size(); ++k)
    if (state.modes()[k].spatial == port) slots.push_back(k);
  return slots;
}

int port_count(const MultimodeState& state, std::size_t idx, const std::vector<std::size_t>& slots) {
  int n = 0;
  for (auto k : slots) n += state.occupation(idx, k);
  return n;
}

}  // namespace

CrossMoments cross_correlations(const MultimodeState& state) {
  const auto s2 = port_slots(state, Spatial::out_2);
  const auto s3 = port_slots(state, Spatial::out_3);
  if (s2.empty() || s3.empty()) throw InvalidParameter("state lacks out_2 / out_3 modes");
  const auto p = state.number_distribution();
  CrossMoments m{0.0, 0.0, 0.0};
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    if (p[idx] == 0.0) continue;
    const double n2 = port_count(state, idx, s2);
    const double n3 = port_count(state, idx, s3);
    m.n2n3 += p[idx] * n2 * n3;
    m.n2 += p[idx] * n2;
    m.n3 += p[idx] * n3;
  }
  return m;
}

double auto_correlation(const MultimodeState& state, Spatial output) {
  const auto slots = port_slots(state, output);
  if (slots.empty()) throw InvalidParameter("state has no modes at the requested output");
  const auto p = state.number_distribution();
  double mean = 0.0;
  double pairs = 0.0;
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    if (p[idx] == 0.0) continue;
    const double n = port_count(state, idx, slots);
    mean += p[idx] * n;
    pairs += p[idx] * n * (n - 1.0);
  }
  if (!(mean > 0.0)) throw UndefinedQuantity("auto-correlation undefined for an empty output");
  return pairs / (mean * mean);
}

std::vector<std::vector<double>> output_number_distribution(const MultimodeState& state) {
  const auto s2 = port_slots(state, Spatial::out_2);
  const auto s3 = port_slots(state, Spatial::out_3);
  if (s2.empty() || s3.empty()) throw InvalidParameter("state lacks out_2 / out_3 modes");
  const std::size_t nmax = s2.size() * static_cast<std::size_t>(state.cutoff()) + 1;
  const std::size_t mmax = s3.size() * static_cast<std::size_t>(state.cutoff()) + 1;
  std::vector<std::vector<double>> joint(nmax, std::vector<double>(mmax, 0.0));
  const auto p = state.number_distribution();
  for (std::size_t idx = 0; idx < p.size(); ++idx)
    if (p[idx] != 0.0) joint[port_count(state, idx, s2)][port_count(state, idx, s3)] += p[idx];
  return joint;
}

std::vector<double> mode_populations(const MultimodeState& state, ModeLabel mode) {
  const std::size_t k = state.mode_index(mode);
  std::vector<double> pops(static_cast<std::size_t>(state.cutoff() + 1), 0.0);
  const auto p = state.number_distribution();
  for (std::size_t idx = 0; idx < p.size(); ++idx) pops[state.occupation(idx, k)] += p[idx];
  return pops;
}

}  // namespace homlo::fock
