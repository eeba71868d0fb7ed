#include "rescomp/core/channel.hpp"

#include <cmath>

#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/kernels/kernels.hpp"

namespace rescomp {

QuantumChannel QuantumChannel::from_kraus(SubsystemShape input, SubsystemShape output, std::vector<Matrix> kraus) {
  if (kraus.empty()) throw Error(ErrorCode::InvalidArgument, "channel needs at least one Kraus operator");
  for (const Matrix& k : kraus) {
    if (k.rows() != output.total() || k.cols() != input.total())
      throw Error(ErrorCode::ShapeMismatch, "Kraus operator has wrong dimensions");
  }
  QuantumChannel ch(std::move(input), std::move(output));
  ch.kraus_ = std::move(kraus);
  if (double e = ch.trace_preservation_error(); e > kTracePreservingTol)
    throw Error(ErrorCode::InvariantViolation, "Kraus operators are not trace preserving (error " + std::to_string(e) + ")");
  return ch;
}

QuantumChannel QuantumChannel::measure_prepare(SubsystemShape input, SubsystemShape output, std::vector<Matrix> povm,
                                               std::vector<DensityMatrix> outputs) {
  if (povm.empty() || povm.size() != outputs.size())
    throw Error(ErrorCode::InvalidArgument, "measure-prepare channel needs one output state per POVM element");
  for (std::size_t k = 0; k < povm.size(); ++k) {
    if (povm[k].rows() != input.total() || povm[k].cols() != input.total())
      throw Error(ErrorCode::ShapeMismatch, "POVM element has wrong dimensions");
    require_same_shape(outputs[k].shape(), output, "measure_prepare");
    povm[k] = linalg::hermitize(povm[k]);
    if (linalg::min_eigenvalue(povm[k]) < -kPsdTol)
      throw Error(ErrorCode::InvariantViolation, "POVM element is not positive semidefinite");
  }
  QuantumChannel ch(std::move(input), std::move(output));
  ch.povm_ = std::move(povm);
  ch.prepared_ = std::move(outputs);
  if (double e = ch.trace_preservation_error(); e > kTracePreservingTol)
    throw Error(ErrorCode::InvariantViolation, "POVM does not sum to identity (error " + std::to_string(e) + ")");
  return ch;
}

QuantumChannel QuantumChannel::identity(const SubsystemShape& shape) {
  const Index d = shape.total();
  return from_kraus(shape, shape, {Matrix::Identity(d, d)});
}

QuantumChannel QuantumChannel::replacer(const SubsystemShape& input, const DensityMatrix& state) {
  const Index d = input.total();
  return measure_prepare(input, state.shape(), {Matrix::Identity(d, d)}, {state});
}

QuantumChannel QuantumChannel::completely_depolarizing(const SubsystemShape& shape) {
  return replacer(shape, DensityMatrix::maximally_mixed(shape));
}

Matrix QuantumChannel::apply(const Matrix& x) const {
  if (x.rows() != input_.total() || x.cols() != input_.total())
    throw Error(ErrorCode::ShapeMismatch, "channel input has wrong dimension");
  if (!kraus_.empty()) return kernels::apply_kraus(kraus_, x);
  Matrix out = Matrix::Zero(output_.total(), output_.total());
  for (std::size_t k = 0; k < povm_.size(); ++k) {
    const Complex w = (povm_[k].array() * x.transpose().array()).sum();
    out += w * prepared_[k].matrix();
  }
  return out;
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const {
  require_same_shape(rho.shape(), input_, "apply_channel");
  return DensityMatrix::trusted(output_, apply(rho.matrix()));
}

std::size_t QuantumChannel::kraus_count() const {
  if (!kraus_.empty()) return kraus_.size();
  std::size_t count = 0;
  for (std::size_t k = 0; k < povm_.size(); ++k) {
    const RealVector pe = linalg::eigenvalues(povm_[k]);
    const RealVector po = prepared_[k].spectrum();
    count += static_cast<std::size_t>((pe.array() > 1e-14).count() * (po.array() > 1e-14).count());
  }
  return count;
}

std::vector<Matrix> QuantumChannel::kraus_ops(Index max_entries) const {
  if (!kraus_.empty()) return kraus_;
  const Index entries = static_cast<Index>(kraus_count()) * input_.total() * output_.total();
  if (entries > max_entries)
    throw Error(ErrorCode::DimensionCap, "Kraus form would need " + std::to_string(entries) + " matrix entries");
  std::vector<Matrix> ops;
  for (std::size_t k = 0; k < povm_.size(); ++k) {
    const linalg::Eigh pe = linalg::eigh(povm_[k]);
    const linalg::Eigh po = linalg::eigh(prepared_[k].matrix());
    for (Index a = 0; a < pe.values.size(); ++a) {
      if (pe.values(a) <= 1e-14) continue;
      for (Index b = 0; b < po.values.size(); ++b) {
        if (po.values(b) <= 1e-14) continue;
        ops.push_back(std::sqrt(pe.values(a) * po.values(b)) * po.vectors.col(b) * pe.vectors.col(a).adjoint());
      }
    }
  }
  return ops;
}

double QuantumChannel::trace_preservation_error() const {
  const Index d = input_.total();
  Matrix acc = Matrix::Zero(d, d);
  if (!kraus_.empty()) {
    for (const Matrix& k : kraus_) acc += k.adjoint() * k;
  } else {
    for (const Matrix& e : povm_) acc += e;
  }
  acc -= Matrix::Identity(d, d);
  return linalg::operator_norm(acc);
}

QuantumChannel QuantumChannel::compose(const QuantumChannel& second, const QuantumChannel& first) {
  require_same_shape(first.output_shape(), second.input_shape(), "compose");
  std::vector<Matrix> ops;
  for (const Matrix& b : second.kraus_ops())
    for (const Matrix& a : first.kraus_ops()) ops.push_back(b * a);
  return from_kraus(first.input_shape(), second.output_shape(), std::move(ops));
}

QuantumChannel QuantumChannel::tensor(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<Matrix> ops;
  for (const Matrix& ka : a.kraus_ops())
    for (const Matrix& kb : b.kraus_ops()) ops.push_back(kernels::kron(ka, kb));
  return from_kraus(a.input_shape().concat(b.input_shape()), a.output_shape().concat(b.output_shape()), std::move(ops));
}

}  // namespace rescomp
