"""Tests for the box construction: recovery, budgets, privacy, dense coding."""
from __future__ import annotations

import numpy as np
import pytest

from qracbox.boxes import tv_distance
from qracbox.metering import (
    ProtocolError,
    QRAC_BUDGET,
    QUBIT_ONLY_BUDGET,
)
from qracbox.qrac import (
    AliceClassicalOutput,
    DenseCodingPair,
    QracResources,
    alice_output_distribution,
    bob_view_distribution,
    channel_branches,
    dense_decode,
    dense_encode,
    qrac_alice,
    qrac_bob,
    qrac_round,
    qrac_round_qubit_only,
    sample_alice_output,
    sample_channel,
)
from qracbox.quantum import (
    KET0,
    KET1,
    KET_PLUS,
    PHI_PLUS,
    BellOutcome,
    bell_project,
    bell_state,
    fidelity,
    haar_random_qubit,
    tensor,
    trace_distance,
)
from qracbox.rng import make_rng

MIXED = np.eye(2) / 2


class TestRecovery:
    def test_chosen_qubit_recovered_in_sampled_rounds(self):
        rng = make_rng(1)
        for seed in range(30):
            psi, phi = haar_random_qubit(rng), haar_random_qubit(rng)
            for w, target in ((0, psi), (1, phi)):
                res = QracResources(make_rng(77, seed))
                a = qrac_alice(psi, phi, res)
                out = qrac_bob(w, a, res)
                assert fidelity(out, target) >= 1 - 1e-10

    def test_chosen_qubit_recovered_in_every_branch(self):
        rng = make_rng(2)
        for _ in range(20):
            psi, phi = haar_random_qubit(rng), haar_random_qubit(rng)
            for w, target in ((0, psi), (1, phi)):
                branches = channel_branches(tensor([psi, phi, KET0 if w == 0 else KET1]))
                assert len(branches) == 64
                assert sum(b.probability for b in branches) == pytest.approx(1.0, abs=1e-12)
                for b in branches:
                    assert fidelity(b.output, target) >= 1 - 1e-10

    def test_wrong_correction_branch_average_is_maximally_mixed(self):
        rng = make_rng(3)
        psi, phi = haar_random_qubit(rng), haar_random_qubit(rng)
        for fixed_b in ((0, 0), (1, 0), (1, 1)):
            for w in (0, 1):
                branches = channel_branches(
                    tensor([psi, phi, KET0 if w == 0 else KET1]), b=fixed_b
                )
                avg = sum(b.probability * b.output.matrix for b in branches)
                assert trace_distance(avg, MIXED) <= 1e-10


class TestAliceOutput:
    def test_exact_distribution_is_uniform(self):
        rng = make_rng(4)
        for omega in (KET0, KET1, KET_PLUS):
            psi, phi = haar_random_qubit(rng), haar_random_qubit(rng)
            dist = alice_output_distribution(psi, phi, omega)
            assert np.max(np.abs(dist - 0.25)) < 1e-12

    def test_sampled_distribution_is_uniform(self):
        rng = make_rng(5)
        counts = np.zeros(4)
        trials = 10**5
        for _ in range(trials):
            counts[sample_alice_output(KET0, KET1, 0, rng).index] += 1
        assert tv_distance(counts / trials, np.full(4, 0.25)) <= 0.02

    def test_same_seed_same_output(self):
        runs = {
            sample_alice_output(KET_PLUS, KET1, 1, make_rng(99)).bits for _ in range(5)
        }
        assert len(runs) == 1

    def test_distribution_independent_of_inputs(self):
        trials = 10**5
        counts = {0: np.zeros(4), 1: np.zeros(4)}
        rng_a, rng_b = make_rng(6, 0), make_rng(6, 1)
        for _ in range(trials):
            counts[0][sample_alice_output(KET0, KET0, 0, rng_a).index] += 1
            counts[1][sample_alice_output(KET_PLUS, KET1, 0, rng_b).index] += 1
        assert tv_distance(counts[0] / trials, counts[1] / trials) <= 0.02


class TestRound:
    def test_basis_inputs_recovered_exactly(self):
        out, transcript = qrac_round(KET0, KET1, KET0, seed=7)
        assert fidelity(out, KET0) == pytest.approx(1.0, abs=1e-12)
        assert transcript.totals == QRAC_BUDGET

    def test_second_input_recovered_for_random_states(self):
        rng = make_rng(8)
        for seed in range(100):
            phi = haar_random_qubit(rng)
            out, _ = qrac_round(KET_PLUS, phi, KET1, seed=seed)
            assert fidelity(out, phi) >= 1 - 1e-10

    def test_superposed_choice_yields_even_mixture(self):
        branches = channel_branches(tensor([KET0, KET1, KET_PLUS]))
        assert len(branches) == 128
        avg = sum(b.probability * b.output.matrix for b in branches)
        assert trace_distance(avg, MIXED) <= 1e-10

    def test_budget_holds_on_every_round(self):
        rng = make_rng(9)
        for seed in range(25):
            psi, phi = haar_random_qubit(rng), haar_random_qubit(rng)
            _, transcript = qrac_round(psi, phi, KET_PLUS, seed=seed)
            assert transcript.totals == QRAC_BUDGET
            for msg in transcript.messages:
                assert msg.direction == "A->B"


class TestResourceContracts:
    def test_alice_reuse_rejected(self):
        res = QracResources(make_rng(0))
        qrac_alice(KET0, KET0, res)
        with pytest.raises(ProtocolError):
            qrac_alice(KET0, KET0, res)

    def test_bob_requires_alice_first(self):
        res = QracResources(make_rng(0))
        with pytest.raises(ProtocolError):
            qrac_bob(0, (0, 0), res)

    def test_bob_reuse_rejected(self):
        res = QracResources(make_rng(0))
        qrac_alice(KET0, KET0, res)
        qrac_bob(0, (0, 0), res)
        with pytest.raises(ProtocolError):
            qrac_bob(0, (0, 0), res)

    def test_multi_qubit_inputs_rejected(self):
        res = QracResources(make_rng(0))
        with pytest.raises(ValueError):
            qrac_alice(PHI_PLUS, KET0, res)


class TestDenseCoding:
    def test_identity_encoding_leaves_phi_plus(self):
        encoded = dense_encode(0, 0, DenseCodingPair())
        assert np.abs(np.vdot(encoded.amplitudes, PHI_PLUS.amplitudes)) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_x_encoding_is_orthogonal_to_phi_plus(self):
        encoded = dense_encode(0, 1, DenseCodingPair())
        assert np.vdot(encoded.amplitudes, PHI_PLUS.amplitudes) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_all_encodings_pairwise_orthogonal(self):
        encodings = {
            (t, s): dense_encode(t, s, DenseCodingPair()) for t in (0, 1) for s in (0, 1)
        }
        keys = list(encodings)
        for i, k1 in enumerate(keys):
            for k2 in keys[i + 1 :]:
                overlap = np.vdot(encodings[k1].amplitudes, encodings[k2].amplitudes)
                assert abs(overlap) < 1e-12

    def test_decode_inverts_encode_with_certainty(self):
        for t in (0, 1):
            for s in (0, 1):
                encoded = dense_encode(t, s, DenseCodingPair())
                prob, _ = bell_project(encoded, (0, 1), BellOutcome(t, s))
                assert prob == pytest.approx(1.0, abs=1e-12)
                assert dense_decode(encoded, make_rng(0)).bits == (t, s)

    def test_encoded_states_match_bell_basis(self):
        for t in (0, 1):
            for s in (0, 1):
                encoded = dense_encode(t, s, DenseCodingPair())
                overlap = np.vdot(bell_state(t, s).amplitudes, encoded.amplitudes)
                assert abs(overlap) == pytest.approx(1.0, abs=1e-12)

    def test_pair_reuse_rejected(self):
        pair = DenseCodingPair()
        dense_encode(1, 1, pair)
        with pytest.raises(ProtocolError):
            dense_encode(0, 0, pair)


class TestQubitOnlyRound:
    def test_matches_standard_round_branch_by_branch(self):
        rng = make_rng(10)
        for seed in range(50):
            psi, phi = haar_random_qubit(rng), haar_random_qubit(rng)
            out_std, tr_std = qrac_round(psi, phi, KET_PLUS, seed=seed)
            out_dc, tr_dc = qrac_round_qubit_only(psi, phi, KET_PLUS, seed=seed)
            assert np.array_equal(out_std.matrix, out_dc.matrix)
            assert tr_std.totals == QRAC_BUDGET
            assert tr_dc.totals == QUBIT_ONLY_BUDGET

    def test_basis_examples(self):
        out, transcript = qrac_round_qubit_only(KET0, KET1, KET0, seed=11)
        assert fidelity(out, KET0) == pytest.approx(1.0, abs=1e-12)
        assert transcript.totals.as_dict() == {
            "bits_a_to_b": 0,
            "bits_b_to_a": 0,
            "qubits_a_to_b": 1,
            "qubits_b_to_a": 0,
        }


class TestUnchosenQubitPrivacy:
    def _views_equal(self, va, vb):
        assert set(va) == set(vb)
        for key in va:
            wa, ma = va[key]
            wb, mb = vb[key]
            assert wa == pytest.approx(wb, abs=1e-12)
            assert np.max(np.abs(ma - mb)) < 1e-10

    def test_bob_view_independent_of_unchosen_second_input(self):
        rng = make_rng(12)
        psi = haar_random_qubit(rng)
        view_a = bob_view_distribution(psi, KET0, w=0)
        view_b = bob_view_distribution(psi, haar_random_qubit(rng), w=0)
        self._views_equal(view_a, view_b)

    def test_bob_view_independent_of_unchosen_first_input(self):
        rng = make_rng(13)
        phi = haar_random_qubit(rng)
        view_a = bob_view_distribution(KET_PLUS, phi, w=1)
        view_b = bob_view_distribution(haar_random_qubit(rng), phi, w=1)
        self._views_equal(view_a, view_b)


class TestForcedCoins:
    def test_forced_coins_match_enumerated_branches(self):
        # a round with pinned coins must realize one of the enumerated
        # branches with those coins, outcome for outcome
        psi, phi = KET_PLUS, KET1
        w = 1
        branches = channel_branches(tensor([psi, phi, KET1]))
        for coins in ((0, 0), (0, 1), (1, 0), (1, 1)):
            res = QracResources(make_rng(55), coins=coins)
            a = qrac_alice(psi, phi, res)
            out = qrac_bob(w, a, res)
            matches = [
                b
                for b in branches
                if b.coins == coins and b.alice == a and b.w == w
            ]
            assert any(
                np.max(np.abs(b.output.matrix - out.matrix)) < 1e-10 for b in matches
            )
            assert fidelity(out, phi) >= 1 - 1e-10


class TestSampledChannel:
    def test_sampled_run_lands_on_an_enumerated_branch(self):
        joint = tensor([KET_PLUS, KET1, KET_PLUS])
        branches = channel_branches(joint)
        by_key = {
            (b.w, b.alice.bits, b.coins, b.first_bell.bits, b.second_bell.bits): b
            for b in branches
        }
        rng = make_rng(14)
        for _ in range(40):
            w, alice_out, rho = sample_channel(joint, rng)
            matches = [
                b
                for key, b in by_key.items()
                if key[0] == w and key[1] == alice_out.bits
            ]
            assert any(np.max(np.abs(b.output.matrix - rho.matrix)) < 1e-10 for b in matches)

    def test_fixed_b_sampling(self):
        joint = tensor([KET0, KET1, KET0])
        rng = make_rng(15)
        avg = np.zeros((2, 2), dtype=complex)
        trials = 400
        for _ in range(trials):
            _, _, rho = sample_channel(joint, rng, b=(0, 1))
            avg += rho.matrix / trials
        assert trace_distance(avg, MIXED) < 0.1


class TestAliceClassicalOutput:
    def test_index_and_bits(self):
        a = AliceClassicalOutput(a1=1, a0=0)
        assert a.bits == (1, 0)
        assert a.index == 2

    def test_bit_validation(self):
        with pytest.raises(ValueError):
            AliceClassicalOutput(a1=2, a0=0)
