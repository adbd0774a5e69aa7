import os
import pathlib

import pytest

import mahler

CORPUS = pathlib.Path(os.environ.get("MAHLER_CORPUS", pathlib.Path(__file__).resolve().parents[2] / "corpus"))


def system(name):
    return mahler.load_system(str(CORPUS / f"{name}.json"))


def test_load_and_round_trip():
    s = system("cantor3")
    assert (s.name, s.q, s.m) == ("cantor3", 2, 3)
    again = mahler.system_from_json(__import__("json").dumps(s.to_json()))
    assert again.to_json() == s.to_json()


def test_thue_morse_series_matches_product():
    coeffs = [1]
    for n in range(7):
        factor = [0] * (2**n + 1)
        factor[0], factor[2**n] = 1, -1
        out = [0] * (len(coeffs) + len(factor) - 1)
        for i, a in enumerate(coeffs):
            for j, b in enumerate(factor):
                out[i + j] += a * b
        coeffs = out
    series = mahler.solve_series(system("thue_morse"), 64)
    assert series[0] == [str(c) for c in coeffs[:64]]


def test_regularity():
    assert mahler.certify_regular(system("cantor3"), "1/2")["regular"]
    cert = mahler.certify_regular(system("singular16"), "1/4")
    assert not cert["regular"] and cert["failing_k"] == 1


def test_lift_and_errors():
    s = system("cantor3")
    r = mahler.lift(s, "1/2", ["1", "-1", "1/2"])
    assert r["coefficients"] == [["1"], ["-1"], ["0", "1"]]
    with pytest.raises(mahler.MahlerError) as info:
        mahler.lift(s, "1/2", ["1", "-1", "0"])
    assert info.value.kind == "NoLiftAtDegree"


def test_kron_lift():
    r = mahler.kron_lift(system("cantor3"), "1/2", "X1*X3 - X2*X3 + 1/2*X3^2")
    assert r["formatted"] == "X1*X3 - X2*X3 + z*X3^2"


def test_kernel_and_hilbert():
    k = mahler.kernel_basis(system("trivial"), "1/2", 1, 3)
    assert k["kernel_dim"] == "4"
    h = mahler.hilbert(system("cantor2"), 3, 3, 128)
    assert h["profile"]["phi"] == [1, 2, 3, 4]
    assert h["trdeg"]["t_hat"] == 1


def test_prove():
    r = mahler.prove(system("cantor3"), "1/2", ["1", "-1", "1/2"], 1, 8, 10)
    assert r["formal_identity"]
    assert r["aux"]["kset_heldout"] == [7, 8, 9, 10]
    assert r["decay"]["values_agree"] and r["decay"]["liouville_ok"]
