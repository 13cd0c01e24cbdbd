#pragma once
#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "homlo/params.hpp"

/// Brute-force truncated Fock-space model of the source / local-oscillator
/// mixing experiment. Every closed form in homlo::analytic is checked against it.
namespace homlo::fock {

using Complex = std::complex<double>;

enum class Spatial { in_a, in_b, out_2, out_3, env };
enum class Polarization { parallel, perpendicular };

struct ModeLabel {
  Spatial spatial;
  Polarization pol{Polarization::parallel};
  bool operator==(const ModeLabel&) const = default;
};

std::string to_string(ModeLabel label);

/// @brief Coherent-state probability mass that a cutoff N discards.
struct TruncationReport {
  int cutoff;
  double tail_mass;
};

/// @brief State over labeled modes, each truncated at `cutoff` photons.
///
/// Stored as a weighted ensemble of normalized pure states, rho = sum_k w_k |psi_k><psi_k|,
/// so a four-mode output costs (N+1)^4 amplitudes per branch rather than (N+1)^8 matrix
/// entries. The density matrix is materialized on request for small spaces.
/// Amplitudes are laid out with the first mode most significant.
class MultimodeState {
 public:
  struct Branch {
    double weight;
    Eigen::VectorXcd amplitudes;
  };

  MultimodeState(std::vector<ModeLabel> modes, int cutoff, std::vector<Branch> branches);

  /// Fock state |n> in a single mode.
  static MultimodeState fock(ModeLabel mode, int n, int cutoff);
  /// Vacuum over the given modes.
  static MultimodeState vacuum(std::vector<ModeLabel> modes, int cutoff);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<Branch>& branches() const { return branches_; }
  /// Throws InvalidParameter for a label not present in the state.
  std::size_t mode_index(ModeLabel mode) const;
  bool has_mode(ModeLabel mode) const;

  double trace() const;
  /// Norm discarded by truncation during the operations that produced this state.
  double truncation_loss() const { return truncation_loss_; }

  /// Full density matrix; refuses spaces larger than `max_dimension`.
  Eigen::MatrixXcd density_matrix(std::size_t max_dimension = 4096) const;

  /// Diagonal of the density matrix: joint photon-number probabilities over all modes.
  std::vector<double> number_distribution() const;

  /// Photon number of `mode_slot` in basis index `flat_index`.
  int occupation(std::size_t flat_index, std::size_t mode_slot) const;

  /// Merge branches with identical amplitude vectors.
  void compact();

 private:
  friend MultimodeState apply_single_mode(const MultimodeState&, ModeLabel, const Eigen::MatrixXcd&);
  friend MultimodeState apply_beam_splitter(const MultimodeState&, ModeLabel, ModeLabel, double, ModeLabel,
                                            ModeLabel);
  friend MultimodeState partial_trace(const MultimodeState&, ModeLabel);
  friend MultimodeState tensor(const MultimodeState&, const MultimodeState&);
  friend MultimodeState mixture(const MultimodeState&, double, const MultimodeState&);

  std::size_t stride(std::size_t mode_slot) const;

  std::vector<ModeLabel> modes_;
  int cutoff_;
  std::size_t dimension_;
  std::vector<Branch> branches_;
  double truncation_loss_{0.0};
};

/// @brief Result of building a truncated displacement operator.
struct Displacement {
  Eigen::MatrixXcd matrix;
  TruncationReport truncation;
  double unitarity_deviation;  ///< max |D^dagger D - I|
};

TruncationReport truncation_report(double mu_alpha, int cutoff);

/// Smallest cutoff whose coherent tail mass is below `tolerance`, plus `margin`
/// to hold the source photons on top of the displaced vacuum.
int recommended_cutoff(double mu_alpha, double tolerance = 1e-10, int margin = 4);

/// Diagonal source state p0|0><0| + p1|1><1| + p2|2><2| in `mode` (default in_a, parallel).
MultimodeState build_qd_state(double p1, double p2, int cutoff,
                              ModeLabel mode = {Spatial::in_a, Polarization::parallel});

/// exp(alpha a^dagger - conj(alpha) a) with the generator truncated at `cutoff`.
Displacement displacement_matrix(Complex alpha, int cutoff);

/// Apply a (cutoff+1)-square operator to one mode of every branch.
MultimodeState apply_single_mode(const MultimodeState& state, ModeLabel mode, const Eigen::MatrixXcd& op);

/// @brief Lossless splitter acting on modes a and b.
///
/// Creation operators map as a^dagger -> sqrt(t) a'^dagger + sqrt(1-t) b'^dagger and
/// b^dagger -> -sqrt(1-t) a'^dagger + sqrt(t) b'^dagger. The transformed modes are relabeled
/// `out_a` and `out_b`. Components pushed past the cutoff are dropped and accounted
/// in truncation_loss().
MultimodeState apply_beam_splitter(const MultimodeState& state, ModeLabel a, ModeLabel b, double t,
                                   ModeLabel out_a, ModeLabel out_b);

MultimodeState partial_trace(const MultimodeState& state, ModeLabel mode);
MultimodeState tensor(const MultimodeState& lhs, const MultimodeState& rhs);
/// w * lhs + (1 - w) * rhs over identical modes.
MultimodeState mixture(const MultimodeState& lhs, double w, const MultimodeState& rhs);

/// Channel of transmission eta realized as a splitter onto a vacuum environment mode
/// that is traced out afterwards.
MultimodeState apply_loss(const MultimodeState& state, ModeLabel mode, double eta);

/// @brief Output of the mixing splitter over {out_2, out_3} x {parallel, perpendicular}.
///
/// The source enters in_a (parallel) after its channel loss; the oscillator enters in_b
/// split as alpha cos(theta) / alpha sin(theta). Output 2 receives the oscillator with
/// weight T and the source with weight R; output 3 the converse. A source with m_psi < 1
/// is mixed as m_psi of the interfering run plus (1 - m_psi) of a non-interfering one.
/// @throws TruncationError if the coherent tail mass at `cutoff` is >= 1e-6
MultimodeState mix_on_beam_splitter(const SourceParams& source, const LocalOscillator& lo,
                                    const BeamSplitterSpec& bs, int cutoff);

/// Polarization-summed photon-number moments of the two outputs.
struct CrossMoments {
  double n2n3;
  double n2;
  double n3;
};

CrossMoments cross_correlations(const MultimodeState& state);

/// <a^dag a^dag a a> / <n>^2 at one output, polarizations summed.
/// @throws UndefinedQuantity when <n> = 0
double auto_correlation(const MultimodeState& state, Spatial output);

/// Joint polarization-summed distribution P(n2, n3), indexed [n2][n3] with n up to 2 * cutoff.
std::vector<std::vector<double>> output_number_distribution(const MultimodeState& state);

/// Single-mode photon-number populations.
std::vector<double> mode_populations(const MultimodeState& state, ModeLabel mode);

}  // namespace homlo::fock
