import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brauer_y02.moduli import legendre_discriminant, s_of_t
from brauer_y02.padic import CycloRing, symbol_zeta
from brauer_y02.witness import (
    WitnessCertificate,
    default_m,
    find_t_nonzero,
    find_t_zero,
    verify_certificate,
)


def test_p3_witnesses():
    nz = find_t_nonzero(3)
    assert nz.t == "2" and nz.symbol_exponent == 1 and nz.discriminant_valuation == 0
    z = find_t_zero(3)
    assert z.t == "4 - 2*z" and z.symbol_exponent == 0
    R = CycloRing(3)
    assert R.parse(z.t) == R.parse("2 + 2*pi")
    assert verify_certificate(nz).passed and verify_certificate(z).passed


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_witnesses_verify(p):
    for cert in (find_t_nonzero(p), find_t_zero(p)):
        report = verify_certificate(cert)
        assert report.passed, report.failures()
    assert find_t_zero(p).symbol_exponent == 0


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.integers(1, 10))
def test_nonzero_exponent_closed_form(p, a):
    if a % p == 0:
        return
    cert = find_t_nonzero(p, a=a)
    m = default_m(p)
    assert cert.symbol_exponent == (-a * pow(m, -1, p)) % p


def test_certificate_recomputation_by_hand():
    cert = find_t_nonzero(7)
    ring = CycloRing(7, cert.precision, cert.guard)
    t = ring.parse(cert.t)
    assert t.is_unit() and (t - 1).is_unit()
    assert legendre_discriminant(t).is_unit()
    assert symbol_zeta(s_of_t(t)).value == cert.symbol_exponent


def test_json_roundtrip():
    cert = find_t_nonzero(5)
    text = cert.dumps()
    data = json.loads(text)
    assert all(isinstance(v, str) for k, v in data.items() if k not in ("parameters", "implications"))
    back = WitnessCertificate.from_json(data)
    assert back == cert
    assert back.dumps() == text


def test_tampered_certificates_fail():
    cert = find_t_nonzero(5)
    bad = WitnessCertificate.from_json(cert.to_json())
    bad.symbol_exponent = (cert.symbol_exponent + 1) % 5
    assert not verify_certificate(bad).passed
    bad = WitnessCertificate.from_json(cert.to_json())
    bad.t = "1 + z"
    assert not verify_certificate(bad).passed
    bad = WitnessCertificate.from_json(cert.to_json())
    bad.kind = "zero"
    assert not verify_certificate(bad).passed
    bad = WitnessCertificate.from_json(cert.to_json())
    bad.t = "((("
    report = verify_certificate(bad)
    assert not report.passed and report.errors


def test_bad_primes():
    with pytest.raises(ValueError, match="odd"):
        find_t_nonzero(2)
    with pytest.raises(ValueError):
        find_t_zero(9)
    with pytest.raises(ValueError):
        find_t_nonzero(101)
    with pytest.raises(ValueError):
        find_t_nonzero(7, a=7)
