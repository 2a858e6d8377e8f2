#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fmqkd {

/// Jones calculus for fully polarized light over the {|h>, |v>} basis,
/// with |h> = (1,0) and |v> = (0,1).  States are unit-norm complex
/// 2-vectors, optical elements are 2x2 complex matrices, and everything
/// is a plain Eigen dense type so expressions compose freely.
template <typename Scalar>
using JonesVector = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

template <typename Scalar>
using JonesMatrix = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

using JonesVectord = JonesVector<double>;
using JonesMatrixd = JonesMatrix<double>;

// ---------------------------------------------------------------------------
// Canonical states

template <typename Scalar = double>
JonesVector<Scalar> horizontal() {
  return JonesVector<Scalar>(1, 0);
}

template <typename Scalar = double>
JonesVector<Scalar> vertical() {
  return JonesVector<Scalar>(0, 1);
}

template <typename Scalar = double>
JonesVector<Scalar> plus45() {
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  return JonesVector<Scalar>(r, r);
}

template <typename Scalar = double>
JonesVector<Scalar> minus45() {
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  return JonesVector<Scalar>(r, -r);
}

template <typename Scalar = double>
JonesVector<Scalar> left_circular() {
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  return JonesVector<Scalar>({r, 0}, {0, r});
}

template <typename Scalar = double>
JonesVector<Scalar> right_circular() {
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  return JonesVector<Scalar>({r, 0}, {0, -r});
}

// ---------------------------------------------------------------------------
// Element matrices

/// Faraday mirror: 45 degree Faraday rotator traversed twice around a plain
/// mirror, i.e. a net 90 degree rotation.  The returned polarization is
/// orthogonal to the input for any state.
template <typename Scalar = double>
JonesMatrix<Scalar> faraday_mirror() {
  JonesMatrix<Scalar> m;
  m << 0, 1, -1, 0;
  return m;
}

/// Polarization-insensitive phase modulator: exp(i*phi) * I.
template <typename Scalar>
JonesMatrix<Scalar> phase_modulator(Scalar phi) {
  return std::polar(Scalar(1), phi) * JonesMatrix<Scalar>::Identity();
}

/// Half-wave plate with its fast axis at `axis_angle` to the horizontal.
template <typename Scalar>
JonesMatrix<Scalar> half_wave_plate(Scalar axis_angle) {
  const Scalar c = std::cos(2 * axis_angle);
  const Scalar s = std::sin(2 * axis_angle);
  JonesMatrix<Scalar> m;
  m << c, s, s, -c;
  return m;
}

/// Rotation of the polarization plane by `angle` (counter-clockwise).
template <typename Scalar>
JonesMatrix<Scalar> rotator(Scalar angle) {
  const Scalar c = std::cos(angle);
  const Scalar s = std::sin(angle);
  JonesMatrix<Scalar> m;
  m << c, -s, s, c;
  return m;
}

/// Ideal linear polarizer transmitting the axis at `angle` to the
/// horizontal.  A rank-1 projector, not unitary.
template <typename Scalar>
JonesMatrix<Scalar> linear_polarizer(Scalar angle) {
  const Scalar c = std::cos(angle);
  const Scalar s = std::sin(angle);
  JonesMatrix<Scalar> m;
  m << c * c, c * s, c * s, s * s;
  return m;
}

/// Birefringent segment with retardance `delta` between its own fast and
/// slow axes: diag(e^{i delta/2}, e^{-i delta/2}).  Conjugate with
/// `rotator` for an arbitrary axis orientation.
template <typename Scalar>
JonesMatrix<Scalar> birefringent(Scalar delta) {
  JonesMatrix<Scalar> m = JonesMatrix<Scalar>::Zero();
  m(0, 0) = std::polar(Scalar(1), delta / 2);
  m(1, 1) = std::polar(Scalar(1), -delta / 2);
  return m;
}

enum class ElementKind {
  FaradayMirror,
  PhaseModulator,
  HalfWavePlate,
  Rotator,
  LinearPolarizer,
  Birefringent,
};

/// Dispatch constructor for the element matrices above.  `param` is the
/// element's angle or phase in radians (ignored for the Faraday mirror).
template <typename Scalar>
JonesMatrix<Scalar> make_element(ElementKind kind, Scalar param = Scalar(0)) {
  if (!std::isfinite(param)) {
    throw std::invalid_argument("make_element: parameter must be finite");
  }
  switch (kind) {
    case ElementKind::FaradayMirror:
      return faraday_mirror<Scalar>();
    case ElementKind::PhaseModulator:
      return phase_modulator(param);
    case ElementKind::HalfWavePlate:
      return half_wave_plate(param);
    case ElementKind::Rotator:
      return rotator(param);
    case ElementKind::LinearPolarizer:
      return linear_polarizer(param);
    case ElementKind::Birefringent:
      return birefringent(param);
  }
  throw std::invalid_argument("make_element: unknown element kind");
}

// ---------------------------------------------------------------------------
// Propagation

/// Applies an element (or composed path) to a state.  Amplitudes are
/// preserved as-is; callers normalize when they need a unit state.
template <typename DerivedM, typename DerivedS>
auto apply(const Eigen::MatrixBase<DerivedM>& element,
           const Eigen::MatrixBase<DerivedS>& state) {
  return (element * state).eval();
}

/// Jones matrix for counter-propagation through a reciprocal element whose
/// forward matrix is `forward`: the plain transpose.  Project-wide rule;
/// the fibers here carry no magneto-optic material.
template <typename Derived>
auto backward_of(const Eigen::MatrixBase<Derived>& forward) {
  return forward.transpose().eval();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m,
                typename Derived::RealScalar tol) {
  using Matrix = typename Derived::PlainObject;
  return ((m.adjoint() * m) - Matrix::Identity())
             .cwiseAbs()
             .maxCoeff() <= tol;
}

/// Scalar birefringence phase of a round trip, arg det of the one-way
/// fiber matrix.
template <typename Derived>
typename Derived::RealScalar birefringence_phase(
    const Eigen::MatrixBase<Derived>& fiber_forward) {
  return std::arg(fiber_forward.determinant());
}

/// Round trip through a birefringent fiber terminated by a mirror:
/// backward_of(F) * mirror * F.  For a unitary F and a Faraday mirror this
/// collapses to e^{i beta} * T_FM with beta = arg det F, so the output is
/// orthogonal to the input no matter what the fiber does.
template <typename DerivedF, typename DerivedM>
JonesMatrix<typename DerivedF::RealScalar> round_trip(
    const Eigen::MatrixBase<DerivedF>& fiber_forward,
    const Eigen::MatrixBase<DerivedM>& mirror) {
  using Real = typename DerivedF::RealScalar;
  if (!is_unitary(fiber_forward, Real(1e-9))) {
    throw std::invalid_argument("round_trip: fiber matrix must be unitary");
  }
  return backward_of(fiber_forward) * mirror * fiber_forward;
}

// ---------------------------------------------------------------------------
// Measurement

/// Lossless polarizing beamsplitter: transmits |h>, reflects |v>.
template <typename Scalar>
struct PbsSplit {
  std::complex<Scalar> transmitted;  // horizontal port
  std::complex<Scalar> reflected;    // vertical port
};

template <typename Derived>
PbsSplit<typename Derived::RealScalar> pbs_split(
    const Eigen::MatrixBase<Derived>& state) {
  return {state(0), state(1)};
}

/// Born-rule probability of the analyzed component: |analyzer * state|^2.
/// `state` must be normalized; invariant under a global phase of the state.
template <typename DerivedM, typename DerivedS>
typename DerivedS::RealScalar detection_probability(
    const Eigen::MatrixBase<DerivedS>& state,
    const Eigen::MatrixBase<DerivedM>& analyzer) {
  return (analyzer * state).squaredNorm();
}

// ---------------------------------------------------------------------------
// Classification

enum class PolarizationClass {
  Plus45,
  Minus45,
  LeftCircular,
  RightCircular,
  Horizontal,
  Vertical,
  Elliptical,
};

inline const char* to_string(PolarizationClass c) {
  switch (c) {
    case PolarizationClass::Plus45: return "plus45";
    case PolarizationClass::Minus45: return "minus45";
    case PolarizationClass::LeftCircular: return "left_circular";
    case PolarizationClass::RightCircular: return "right_circular";
    case PolarizationClass::Horizontal: return "horizontal";
    case PolarizationClass::Vertical: return "vertical";
    case PolarizationClass::Elliptical: return "elliptical";
  }
  return "unknown";
}

/// Poincare-sphere coordinates (S1, S2, S3) of a normalized state.
/// Global-phase invariant by construction.
template <typename Derived>
Eigen::Matrix<typename Derived::RealScalar, 3, 1> poincare_coordinates(
    const Eigen::MatrixBase<Derived>& state) {
  using Real = typename Derived::RealScalar;
  const std::complex<Real> h = state(0);
  const std::complex<Real> v = state(1);
  const std::complex<Real> cross = std::conj(h) * v;
  return {std::norm(h) - std::norm(v), 2 * cross.real(), 2 * cross.imag()};
}

/// Matches a normalized state against the six canonical polarizations on
/// the Poincare sphere (tolerance 1e-9 per coordinate); anything else is
/// elliptical.  Handedness convention: (1, i)/sqrt(2) is left circular.
template <typename Derived>
PolarizationClass classify(const Eigen::MatrixBase<Derived>& state) {
  using Real = typename Derived::RealScalar;
  if (state.squaredNorm() == Real(0)) {
    throw std::invalid_argument("classify: zero state");
  }
  const auto s = poincare_coordinates(state);
  const Real tol = Real(1e-9);
  const auto near = [tol](Real a, Real b, Real c, Real x, Real y, Real z) {
    return std::abs(a - x) <= tol && std::abs(b - y) <= tol &&
           std::abs(c - z) <= tol;
  };
  if (near(s[0], s[1], s[2], 1, 0, 0)) return PolarizationClass::Horizontal;
  if (near(s[0], s[1], s[2], -1, 0, 0)) return PolarizationClass::Vertical;
  if (near(s[0], s[1], s[2], 0, 1, 0)) return PolarizationClass::Plus45;
  if (near(s[0], s[1], s[2], 0, -1, 0)) return PolarizationClass::Minus45;
  if (near(s[0], s[1], s[2], 0, 0, 1)) return PolarizationClass::LeftCircular;
  if (near(s[0], s[1], s[2], 0, 0, -1)) return PolarizationClass::RightCircular;
  return PolarizationClass::Elliptical;
}

}  // namespace fmqkd
