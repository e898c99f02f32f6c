import math
import random
from dataclasses import replace

import numpy as np
import pytest

from conftest import toy_params
from gapforge.assembly import (
    AssignmentMismatch,
    GapCertificate,
    NonCoprimeError,
    build_certificate,
    certificate_from_json,
    certificate_to_json,
    decimal_digits,
    modular_inverse_r,
    solve_U0,
    verify_certificate,
)
from gapforge.construction import COVER_PHASE, ResidueAssignment, max_covered_U
from gapforge.primes import PrimorialValue, primorial_excluding


def assignment_from(entries: dict[int, int]) -> ResidueAssignment:
    asg = ResidueAssignment()
    for p, c in entries.items():
        asg.add(p, c, COVER_PHASE)
    return asg


@pytest.fixture(scope="module")
def t1_certificate():
    params = toy_params()
    U_max, asg = max_covered_U(params)
    final = replace(params, U=U_max)
    return final, asg, build_certificate(final, asg, with_bounds=True)


@pytest.fixture(scope="module")
def t2_certificate():
    params = toy_params(M=3, a=1, U=13)
    U_max, asg = max_covered_U(params)
    final = replace(params, U=U_max)
    return final, asg, build_certificate(final, asg, with_bounds=True)


class TestSolveU0:
    def test_example_105(self):
        asg = assignment_from({3: 1, 5: 2, 7: 3})
        pv = PrimorialValue(value=105, limit=7, excluded_modulus=2)
        assert solve_U0(asg, 0, pv) == 53

    def test_zero_residues(self):
        asg = assignment_from({2: 0, 3: 0, 5: 0})
        pv = primorial_excluding(5, 1)
        for L in (0, 1, 29, 30, 31, 500):
            got = solve_U0(asg, L, pv)
            assert got % 30 == 0 and L <= got < L + 30

    def test_brute_force_windows(self):
        rng = random.Random(13)
        for _ in range(50):
            primes = rng.sample([2, 3, 5, 7, 11, 13, 17, 19], rng.randint(2, 5))
            P = math.prod(primes)
            M = math.prod(p for p in (2, 3, 5, 7, 11, 13, 17, 19) if p not in primes)
            asg = assignment_from({p: rng.randrange(p) for p in primes})
            pv = PrimorialValue(value=P, limit=19, excluded_modulus=M)
            L = rng.randrange(0, 10**6)
            got = solve_U0(asg, L, pv)
            assert L <= got < L + P
            assert all((got + asg.entries[p]) % p == 0 for p in primes)
            # uniqueness: the sieve of the window agrees
            window = np.arange(L, L + P, dtype=np.int64)
            hit = np.ones(P, dtype=bool)
            for p, c in asg.entries.items():
                hit &= (window + c) % p == 0
            assert window[hit].tolist() == [got]

    def test_key_mismatch(self):
        asg = assignment_from({3: 1, 5: 2})
        pv = PrimorialValue(value=105, limit=7, excluded_modulus=2)
        with pytest.raises(AssignmentMismatch):
            solve_U0(asg, 0, pv)


class TestModularInverseR:
    def test_examples(self):
        assert modular_inverse_r(1, primorial_excluding(19, 1)) == 9699689
        assert modular_inverse_r(3, PrimorialValue(value=70, limit=7, excluded_modulus=3)) == 23
        with pytest.raises(NonCoprimeError):
            modular_inverse_r(2, PrimorialValue(value=70, limit=7, excluded_modulus=3))

    def test_property(self):
        rng = random.Random(17)
        for _ in range(60):
            P = rng.randrange(3, 10**9)
            M = rng.randrange(1, 10**6)
            if math.gcd(M, P) != 1:
                continue
            r = modular_inverse_r(M, PrimorialValue(value=P, limit=2, excluded_modulus=1))
            assert 0 <= r < P
            assert (M * r + 1) % P == 0


class TestBuildCertificate:
    def test_t1_fields(self, t1_certificate):
        final, asg, cert = t1_certificate
        assert cert.U == 17 and cert.M == 1 and cert.a == 0
        assert len(cert.witnesses) == 17
        # the phase survivor 14 is certified by its cover prime 7
        assert cert.witnesses[13] == 7
        # position 1 hits the unit phase: smallest covering prime is 2
        assert cert.witnesses[0] == 2
        P = primorial_excluding(20, 1).value
        assert cert.block_start == cert.U0  # M = 1, a = 0
        assert 20 <= cert.U0 < 20 + P
        for j in range(1, 18):
            p = cert.witnesses[j - 1]
            assert (cert.block_start + j) % p == 0
            assert j % p == dict(cert.assignment)[p]

    def test_t1_bounds(self, t1_certificate):
        _, _, cert = t1_certificate
        assert cert.prev_prime <= cert.block_start
        assert cert.next_prime >= cert.block_start + 18
        assert cert.gap == cert.next_prime - cert.prev_prime >= 18
        assert cert.primality_grade == "proven"

    def test_t2_progression(self, t2_certificate):
        final, asg, cert = t2_certificate
        assert cert.U == 13
        assert cert.block_start % 3 == 1
        assert cert.prev_prime % 3 == 1 and cert.next_prime % 3 == 1
        assert cert.gap >= 3 * 14
        for j in range(1, 14):
            assert (cert.block_start + 3 * j) % cert.witnesses[j - 1] == 0

    def test_without_bounds(self):
        params = toy_params()
        U_max, asg = max_covered_U(params)
        cert = build_certificate(replace(params, U=U_max), asg, with_bounds=False)
        assert cert.prev_prime is None and cert.next_prime is None
        assert cert.gap is None and cert.primality_grade is None

    def test_window_start_above_x(self, t2_certificate):
        _, _, cert = t2_certificate
        assert cert.M * cert.U0 >= cert.x
        for j in range(1, cert.U + 1):
            assert cert.block_start + j * cert.M > cert.x


class TestVerifyCertificate:
    def test_round_trip(self, t1_certificate, t2_certificate):
        assert verify_certificate(t1_certificate[2]).valid
        assert verify_certificate(t2_certificate[2]).valid

    def test_corrupted_witness(self, t1_certificate):
        _, _, cert = t1_certificate
        bad = replace(cert, witnesses=list(cert.witnesses))
        bad.witnesses[4] = 13  # 13 does not divide block_start + 5
        v = verify_certificate(bad)
        assert not v.valid and v.reason == "witness 5"

    def test_window_violation(self, t1_certificate):
        _, _, cert = t1_certificate
        P = primorial_excluding(cert.x, cert.M).value
        bad = replace(cert, U0=cert.U0 + P)
        v = verify_certificate(bad)
        assert not v.valid and v.reason == "window"

    def test_tampered_r(self, t1_certificate):
        _, _, cert = t1_certificate
        v = verify_certificate(replace(cert, r=cert.r - 1))
        assert not v.valid and v.reason == "r"

    def test_tampered_block_start(self, t1_certificate):
        _, _, cert = t1_certificate
        v = verify_certificate(replace(cert, block_start=cert.block_start + cert.M))
        assert not v.valid

    def test_tampered_gap(self, t1_certificate):
        _, _, cert = t1_certificate
        v = verify_certificate(replace(cert, gap=cert.gap + 1))
        assert not v.valid and v.reason == "gap value"

    def test_shrunken_bounds_catch_interior_prime(self, t1_certificate):
        # widen the claimed gap past the true next prime: an interior prime appears
        _, _, cert = t1_certificate
        bad = replace(cert, next_prime=cert.next_prime + 210,
                      gap=cert.next_prime + 210 - cert.prev_prime)
        v = verify_certificate(bad)
        assert not v.valid
        assert v.reason in ("bounds not prime", "interior prime") or "interior" in v.reason

    def test_wrong_assignment_keys(self, t1_certificate):
        _, _, cert = t1_certificate
        v = verify_certificate(replace(cert, assignment=cert.assignment[1:]))
        assert not v.valid and v.reason == "assignment primes"

    def test_noncoprime_rejected(self, t1_certificate):
        _, _, cert = t1_certificate
        v = verify_certificate(replace(cert, M=4, a=2))
        assert not v.valid and v.reason == "coprimality"


class TestSerialization:
    def test_round_trip_bytes(self, t1_certificate):
        _, _, cert = t1_certificate
        text = certificate_to_json(cert)
        back = certificate_from_json(text)
        assert back == cert
        assert certificate_to_json(back) == text

    def test_decimal_strings(self, t2_certificate):
        _, _, cert = t2_certificate
        import json

        doc = json.loads(certificate_to_json(cert))
        for key in ("U0", "r", "block_start", "prev_prime", "next_prime", "gap"):
            assert isinstance(doc[key], str) and doc[key].isdigit()
        assert isinstance(doc["witnesses"], list) and len(doc["witnesses"]) == cert.U

    def test_optional_fields_omitted(self):
        params = toy_params()
        U_max, asg = max_covered_U(params)
        cert = build_certificate(replace(params, U=U_max), asg, with_bounds=False)
        import json

        doc = json.loads(certificate_to_json(cert))
        for key in ("prev_prime", "next_prime", "gap", "primality_grade"):
            assert key not in doc

    def test_verifies_after_parse(self, t1_certificate):
        _, _, cert = t1_certificate
        assert verify_certificate(certificate_from_json(certificate_to_json(cert))).valid


class TestDecimalDigits:
    @pytest.mark.parametrize("n", [1, 9, 10, 99, 100, 10**17 - 1, 10**17, 7**300])
    def test_matches_str(self, n):
        assert decimal_digits(n) == len(str(n))
