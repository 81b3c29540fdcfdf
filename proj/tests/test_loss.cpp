// Copyright 2026 The varq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "varq/loss.hpp"

namespace varq {
namespace {

// |Phi> with label bit set on the upper half of addresses, label qubit first.
oracle::Vector label_oracle(std::size_t n) {
  const std::size_t cells = std::size_t{1} << n;
  oracle::Vector v = oracle::Vector::Zero(static_cast<Eigen::Index>(2 * cells));
  for (std::size_t i = 0; i < cells; ++i) {
    const std::size_t bit = i >= cells / 2 ? 1 : 0;
    v(static_cast<Eigen::Index>(bit * cells + i)) =
        1.0 / std::sqrt(static_cast<double>(cells));
  }
  return v;
}

double fidelity_oracle(const StateVector& psi, std::size_t readout,
                       const std::vector<std::size_t>& controls) {
  std::vector<std::size_t> keep{readout};
  keep.insert(keep.end(), controls.begin(), controls.end());
  const oracle::Matrix rho = oracle::brute_partial_trace(psi, keep);
  const oracle::Vector phi = label_oracle(controls.size());
  return (phi.adjoint() * rho * phi)(0, 0).real();
}

std::vector<QubitIndex> iota(std::size_t from, std::size_t count) {
  std::vector<QubitIndex> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = from + j;
  return out;
}

EncodedSample sample(StateVector s, ClassBit label) {
  return {std::move(s), label, std::nullopt};
}

QramStore random_store(std::size_t n, std::size_t k, std::mt19937_64& rng,
                       bool real = true) {
  std::vector<EncodedSample> batch;
  const std::size_t size = std::size_t{1} << n;
  for (std::size_t i = 0; i < size; ++i) {
    batch.push_back(sample(oracle::random_state(k, rng, real),
                           i < size / 2 ? ClassBit::zero : ClassBit::one));
  }
  return build_store(batch);
}

ParameterVector random_theta(const AnsatzSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.0, 2 * std::numbers::pi);
  ParameterVector t;
  for (std::size_t j = 0; j < spec.parameter_count(); ++j) {
    t.values.push_back(a(rng));
  }
  return t;
}

TEST(LabelState, SingleControlIsBell) {
  const LabelState phi = prepare_label_state(1);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(phi.state[0].real(), r, 1e-15);
  EXPECT_NEAR(std::abs(phi.state[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(phi.state[2]), 0.0, 1e-15);
  EXPECT_NEAR(phi.state[3].real(), r, 1e-15);
}

TEST(LabelState, TwoControls) {
  const LabelState phi = prepare_label_state(2);
  const double want[] = {0.5, 0.5, 0, 0, 0, 0, 0.5, 0.5};
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(phi.state[i].real(), want[i], 1e-15);
    EXPECT_EQ(phi.state[i].imag(), 0.0);
  }
}

TEST(LabelState, CircuitMatchesClosedForm) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const LabelState a = prepare_label_state(n);
    const LabelState b = label_state_closed_form(n);
    EXPECT_LT(oracle::max_diff(oracle::to_eigen(a.state), label_oracle(n)),
              1e-12);
    EXPECT_LT(oracle::max_diff(oracle::to_eigen(b.state), label_oracle(n)),
              1e-15);
    EXPECT_NEAR(measure_probability(a.state, 0, 1), 0.5, 1e-12);
  }
}

TEST(LabelState, NeedsAControl) {
  EXPECT_THROW(prepare_label_state(0), ConfigError);
  EXPECT_THROW(label_state_closed_form(0), ConfigError);
}

TEST(SwapTest, IdenticalStatesAlwaysPass) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const LabelState phi = prepare_label_state(n);
    const auto r = swap_test(phi.state, phi, 0, iota(1, n));
    EXPECT_NEAR(r.p_zero, 1.0, 1e-12);
    EXPECT_NEAR(r.overlap, 1.0, 1e-12);
    EXPECT_FALSE(r.shots.has_value());
  }
}

TEST(SwapTest, OrthogonalStatesGiveHalf) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const LabelState phi = prepare_label_state(n);
    const StateVector flipped = apply_gate(phi.state, gate::x(0));
    const auto r = swap_test(flipped, phi, 0, iota(1, n));
    EXPECT_NEAR(r.p_zero, 0.5, 1e-12);
    EXPECT_NEAR(r.overlap, 0.0, 1e-12);
  }
}

TEST(SwapTest, MatchesReducedStateOracle) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const std::size_t k = 1 + (trial / 3) % 3;
    const StateVector psi = oracle::random_state(k + n, rng);
    const std::size_t readout = static_cast<std::size_t>(trial) % k;
    const auto controls = iota(k, n);
    const LabelState phi = prepare_label_state(n);
    const double want = fidelity_oracle(psi, readout, controls);
    const auto r = swap_test(psi, phi, readout, controls);
    EXPECT_NEAR(r.overlap, want, 1e-10);
    EXPECT_NEAR(r.p_zero, 0.5 * (1 + want), 1e-10);
    EXPECT_NEAR(subsystem_fidelity(psi, phi, readout, controls), want, 1e-10);
  }
}

TEST(SwapTest, LayoutErrors) {
  const LabelState phi = prepare_label_state(2);
  const StateVector psi(4);
  EXPECT_THROW(swap_test(psi, phi, 0, iota(2, 1)), ConfigError);
  EXPECT_THROW(swap_test(psi, phi, 0, iota(3, 2)), ConfigError);
  EXPECT_THROW(swap_test(psi, phi, 2, iota(2, 2)), ConfigError);
  EXPECT_THROW(swap_test(psi, phi, 0, iota(2, 2), ShotsMode{0, 1}),
               ConfigError);
}

TEST(SwapTest, ShotEstimateIsUnbiased) {
  std::mt19937_64 rng(52);
  const StateVector psi = oracle::random_state(4, rng);
  const LabelState phi = prepare_label_state(2);
  const auto controls = iota(2, 2);
  const double p = swap_test(psi, phi, 0, controls).p_zero;
  const std::size_t reps = 1000;
  const std::size_t shots = 1024;
  double sum = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto est = swap_test(psi, phi, 0, controls, ShotsMode{shots, r});
    ASSERT_EQ(est.shots, shots);
    sum += est.p_zero;
  }
  const double se =
      std::sqrt(p * (1 - p) / static_cast<double>(shots * reps));
  EXPECT_LE(std::abs(sum / reps - p), 3 * se);
}

TEST(SwapTest, ShotsAreSeeded) {
  std::mt19937_64 rng(53);
  const StateVector psi = oracle::random_state(3, rng);
  const LabelState phi = prepare_label_state(1);
  const auto a = swap_test(psi, phi, 1, iota(2, 1), ShotsMode{512, 9});
  const auto b = swap_test(psi, phi, 1, iota(2, 1), ShotsMode{512, 9});
  EXPECT_EQ(a.p_zero, b.p_zero);
}

TEST(BatchedLoss, PerfectAndWorstStores) {
  const auto spec = default_ansatz(1, 1);
  const ParameterVector zero{{0.0}};
  const QramStore good = build_store(std::vector<EncodedSample>{
      sample(StateVector::basis(1, 0), ClassBit::zero),
      sample(StateVector::basis(1, 1), ClassBit::one)});
  EXPECT_NEAR(batched_loss(good, spec, zero), 0.0, 1e-12);
  const QramStore bad = build_store(std::vector<EncodedSample>{
      sample(StateVector::basis(1, 1), ClassBit::zero),
      sample(StateVector::basis(1, 0), ClassBit::one)});
  EXPECT_NEAR(batched_loss(bad, spec, zero), 1.0, 1e-12);
}

TEST(BatchedLoss, SingleControlProductForm) {
  // n = 1, k = 1: the whole register is compared, so the overlap is
  // |<0|A psi_0> + <1|A psi_1>|^2 / 4.
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    const QramStore store = random_store(1, 1, rng, false);
    const auto spec = default_ansatz(1, 3);
    const auto theta = random_theta(spec, rng);
    const StateVector a0 = apply_ansatz(spec, theta, store.cell(0).state);
    const StateVector a1 = apply_ansatz(spec, theta, store.cell(1).state);
    const double want = 1.0 - std::norm(a0[0] + a1[1]) / 4.0;
    EXPECT_NEAR(batched_loss(store, spec, theta), want, 1e-12);
  }
}

TEST(BatchedLoss, MatchesDenseOracle) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const QramStore store = random_store(n, 2, rng);
    const auto spec = default_ansatz(2, 4);
    const auto theta = random_theta(spec, rng);
    const std::size_t readout = static_cast<std::size_t>(trial) % 2;

    // A(theta) (x) I on sum_i |psi_i>|i> / sqrt(N), built densely.
    const std::size_t cells = store.size();
    oracle::Vector full =
        oracle::Vector::Zero(static_cast<Eigen::Index>(4 * cells));
    for (std::size_t i = 0; i < cells; ++i) {
      oracle::Vector e = oracle::Vector::Zero(static_cast<Eigen::Index>(cells));
      e(static_cast<Eigen::Index>(i)) = 1.0;
      full += Eigen::kroneckerProduct(oracle::to_eigen(store.cell(i).state), e)
                  .eval();
    }
    full /= std::sqrt(static_cast<double>(cells));
    oracle::Matrix a = oracle::identity(4);
    std::size_t p = 0;
    for (std::size_t l = 0; l < spec.layers; ++l) {
      a = (Eigen::kroneckerProduct(oracle::ry(theta.values[p]),
                                   oracle::ry(theta.values[p + 1]))
               .eval() *
           a)
              .eval();
      p += 2;
      a = (oracle::gate_matrix(gate::cz(0, 1), 2) * a).eval();
    }
    const oracle::Vector out =
        Eigen::kroneckerProduct(a, oracle::identity(cells)).eval() * full;
    std::vector<Complex> amps(out.data(), out.data() + out.size());
    const StateVector psi = StateVector::from_amplitudes(std::move(amps));
    std::vector<std::size_t> controls;
    for (std::size_t j = 0; j < n; ++j) controls.push_back(2 + j);
    const double want = 1.0 - fidelity_oracle(psi, readout, controls);

    EXPECT_NEAR(batched_loss(store, spec, theta, ExactMode{}, readout), want,
                1e-10);
  }
}

TEST(BatchedLoss, BoundedAndPeriodic) {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const QramStore store = random_store(n, 2, rng);
    const auto spec = default_ansatz(2, 2);
    const auto theta = random_theta(spec, rng);
    const double loss = batched_loss(store, spec, theta);
    EXPECT_GE(loss, -1e-12);
    EXPECT_LE(loss, 1.0 + 1e-10);
    for (std::size_t j = 0; j < theta.size(); ++j) {
      ParameterVector shifted = theta;
      shifted.values[j] += 2 * std::numbers::pi;
      EXPECT_NEAR(batched_loss(store, spec, shifted), loss, 1e-10);
    }
  }
}

TEST(BatchedLoss, Errors) {
  std::mt19937_64 rng(57);
  const QramStore store = random_store(1, 2, rng);
  EXPECT_THROW(batched_loss(store, default_ansatz(3, 1),
                            ParameterVector{{0, 0, 0}}),
               ConfigError);
  EXPECT_THROW(batched_loss(store, default_ansatz(2, 1),
                            ParameterVector{{0, 0}}, ExactMode{}, 2),
               ConfigError);
}

TEST(SwapTestCost, CountsPerControl) {
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto c = swap_test_cost(n);
    EXPECT_EQ(c.hadamards, 2u);
    EXPECT_EQ(c.cswaps, n + 1);
    EXPECT_EQ(c.measurements, 1u);
    EXPECT_EQ(c.gates(), n + 3);
  }
}

}  // namespace
}  // namespace varq
