#pragma once

// Brute-force reference for the statevector simulator: every gate is expanded
// to a full 2^n x 2^n matrix by Kronecker products and applied as a
// matrix-vector product. Rotations are built as cos(a/2) I - i sin(a/2) P from
// the Pauli matrices rather than from the simulator's own gate table.

#include <complex>
#include <cstddef>
#include <vector>

#include "orbqfl/qsim.hpp"

namespace oracle {

using cd = std::complex<double>;

struct Dense {
  std::size_t n = 0;
  std::vector<cd> a;  // row-major n x n

  explicit Dense(std::size_t size) : n(size), a(size * size) {}
  cd& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
  cd operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }

  static Dense identity(std::size_t size) {
    Dense m(size);
    for (std::size_t i = 0; i < size; ++i) m(i, i) = 1.0;
    return m;
  }
  static Dense from2(cd a00, cd a01, cd a10, cd a11) {
    Dense m(2);
    m(0, 0) = a00;
    m(0, 1) = a01;
    m(1, 0) = a10;
    m(1, 1) = a11;
    return m;
  }
};

inline Dense kron(const Dense& A, const Dense& B) {
  Dense out(A.n * B.n);
  for (std::size_t i = 0; i < A.n; ++i)
    for (std::size_t j = 0; j < A.n; ++j)
      for (std::size_t k = 0; k < B.n; ++k)
        for (std::size_t l = 0; l < B.n; ++l) out(i * B.n + k, j * B.n + l) = A(i, j) * B(k, l);
  return out;
}

inline Dense add(const Dense& A, const Dense& B) {
  Dense out(A.n);
  for (std::size_t i = 0; i < A.a.size(); ++i) out.a[i] = A.a[i] + B.a[i];
  return out;
}

inline Dense pauli(char p) {
  const cd i(0.0, 1.0);
  switch (p) {
    case 'X': return Dense::from2(0.0, 1.0, 1.0, 0.0);
    case 'Y': return Dense::from2(0.0, -i, i, 0.0);
    case 'Z': return Dense::from2(1.0, 0.0, 0.0, -1.0);
    default: return Dense::identity(2);
  }
}

inline Dense rotation(char p, double angle) {
  const Dense P = pauli(p);
  Dense out = Dense::identity(2);
  for (std::size_t k = 0; k < 4; ++k) out.a[k] = std::cos(angle / 2.0) * out.a[k] - cd(0.0, std::sin(angle / 2.0)) * P.a[k];
  return out;
}

// Qubit k is bit k of the basis index, so the factor for qubit n-1 comes first.
inline Dense embed(std::size_t n_qubits, const std::vector<std::pair<std::size_t, Dense>>& factors) {
  Dense out = Dense::identity(1);
  for (std::size_t q = n_qubits; q-- > 0;) {
    Dense f = Dense::identity(2);
    for (const auto& [target, m] : factors)
      if (target == q) f = m;
    out = kron(out, f);
  }
  return out;
}

inline Dense gate_matrix(std::size_t n_qubits, const orbqfl::qsim::GateOp& g) {
  using orbqfl::qsim::GateKind;
  const auto P0 = Dense::from2(1.0, 0.0, 0.0, 0.0);
  const auto P1 = Dense::from2(0.0, 0.0, 0.0, 1.0);
  const std::size_t a = g.targets[0];
  const std::size_t b = g.targets[1];
  switch (g.kind) {
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      return embed(n_qubits, {{a, Dense::from2(r, r, r, -r)}});
    }
    case GateKind::RX: return embed(n_qubits, {{a, rotation('X', g.angle)}});
    case GateKind::RY: return embed(n_qubits, {{a, rotation('Y', g.angle)}});
    case GateKind::RZ: return embed(n_qubits, {{a, rotation('Z', g.angle)}});
    case GateKind::CX: return add(embed(n_qubits, {{a, P0}}), embed(n_qubits, {{a, P1}, {b, pauli('X')}}));
    case GateKind::CZ: return add(embed(n_qubits, {{a, P0}}), embed(n_qubits, {{a, P1}, {b, pauli('Z')}}));
  }
  return Dense::identity(std::size_t{1} << n_qubits);
}

inline std::vector<cd> multiply(const Dense& U, const std::vector<cd>& v) {
  std::vector<cd> out(v.size());
  for (std::size_t r = 0; r < U.n; ++r)
    for (std::size_t c = 0; c < U.n; ++c) out[r] += U(r, c) * v[c];
  return out;
}

inline std::vector<cd> run(std::size_t n_qubits, const std::vector<orbqfl::qsim::GateOp>& gates) {
  std::vector<cd> v(std::size_t{1} << n_qubits);
  v[0] = 1.0;
  for (const auto& g : gates) v = multiply(gate_matrix(n_qubits, g), v);
  return v;
}

inline std::vector<double> probabilities(const std::vector<cd>& v) {
  std::vector<double> p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = std::norm(v[i]);
  return p;
}

}  // namespace oracle
