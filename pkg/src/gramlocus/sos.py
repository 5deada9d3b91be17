"""Exact sum-of-squares certificates for the facet inequalities.

For a pivot slot p the target polynomial is

    D = sum_{j != p} d_j  -  d_p

where each d_j is the slot-j Gram determinant expanded as a sum of squared
2x2 minors in the tensor entries. D is itself a sum of squares; the
construction below assembles the decomposition explicitly and a verification
gate re-expands it with exact integer arithmetic and compares against the
target term map.

Structure of the certificate, grouping degree-2 monomials a_u a_v by the
number m of slots where u and v differ:

* m = 2: "face" minors whose two varying slots both avoid the pivot appear in
  exactly two Gram determinants, hence coefficient 2.  Minors involving the
  pivot slot cancel against the -d_p term.
* m >= 3, varying set avoiding the pivot: each minor lives in exactly one
  non-pivot Gram determinant, so these blocks are already sums of squares
  with coefficient 1.
* m >= 3, varying set containing the pivot: the block is a signed sum over
  the vertices x in {0,1}^(m-1) of products A_x = a_(0x) a_(1,~x), with cube
  edges weighted +1 and antipodal diagonals -1.  Pairing the diagonals
  {x,~x}, each pair contributes one 4-term square and leaves behind the same
  structure on the two half-cubes, which recurses down to the 4-cycle base
  case.  All squares have coefficient 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polyalg import IntPolynomial, QuadraticForm, poly_equal
from .tensor import BinaryTensor, index_from_offset, offset_from_index

MAX_CERT_ORDER = 8


class CertificateError(ValueError):
    """Raised when a constructed certificate fails its exactness gate."""


@dataclass(frozen=True)
class SosCertificate:
    order: int
    pivot: int  # 1-based slot whose determinant carries the minus sign
    terms: tuple[tuple[Fraction, QuadraticForm], ...]


def _det_polynomial(n: int, slot0: int) -> IntPolynomial:
    """Slot Gram determinant as the exact sum of squared 2x2 minors."""
    rest = [q for q in range(n) if q != slot0]
    total = IntPolynomial.zero()
    cols = list(itertools.product((0, 1), repeat=n - 1))
    for ci, cj in itertools.combinations(cols, 2):
        def entry(bit: int, col: tuple[int, ...]) -> int:
            assign = dict(zip(rest, col))
            assign[slot0] = bit
            return offset_from_index(tuple(assign[q] for q in range(n)))

        form = QuadraticForm([(1, entry(0, ci), entry(1, cj)),
                              (-1, entry(1, ci), entry(0, cj))])
        total = total + form.square()
    return total


def build_target(n: int, pivot: int) -> IntPolynomial:
    """Exact expansion of sum_{j != pivot} d_j - d_pivot in the tensor entries."""
    if not 2 <= n <= MAX_CERT_ORDER:
        raise ValueError(f"order must be in 2..{MAX_CERT_ORDER}, got {n}")
    if not 1 <= pivot <= n:
        raise ValueError(f"pivot must be in 1..{n}, got {pivot}")
    total = IntPolynomial.zero()
    for slot0 in range(n):
        d = _det_polynomial(n, slot0)
        total = total - d if slot0 == pivot - 1 else total + d
    return total


def _complement(bits: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(1 - b for b in bits)


def _mm_vertex_forms(m: int) -> list[dict[tuple[int, ...], int]]:
    """Squares for the all-slots-differ block, as signed vertex combinations.

    Vertices are x in {0,1}^(m-1) standing for the product a_(0x) a_(1,~x).
    Each returned map has four entries; the full block is the sum of their
    squares.  Recursion: one square per antipodal diagonal pair, then two
    half-cube copies of the (m-1) structure.
    """
    if m <= 2:
        return []
    forms: list[dict[tuple[int, ...], int]] = []
    for z in itertools.product((0, 1), repeat=m - 2):
        if z[0] == 1:
            continue  # {z, ~z} handled once
        nz = _complement(z)
        forms.append({(0,) + z: 1, (1,) + nz: 1, (0,) + nz: -1, (1,) + z: -1})
    for half in (0, 1):
        for f in _mm_vertex_forms(m - 1):
            forms.append({(half,) + v: s for v, s in f.items()})
    return forms


def build_certificate(n: int, pivot: int, verify: bool = False) -> SosCertificate:
    """Assemble the sum-of-squares decomposition of build_target(n, pivot).

    With verify=True the expansion is re-derived with exact integer
    arithmetic and compared against the target; any mismatch raises
    CertificateError with a residual summary.
    """
    if not 3 <= n <= MAX_CERT_ORDER:
        raise ValueError(f"order must be in 3..{MAX_CERT_ORDER}, got {n}")
    if not 1 <= pivot <= n:
        raise ValueError(f"pivot must be in 1..{n}, got {pivot}")
    p0 = pivot - 1
    positions = list(range(n))
    others = [q for q in positions if q != p0]
    terms: list[tuple[Fraction, QuadraticForm]] = []

    def offset(assign: dict[int, int]) -> int:
        return offset_from_index(tuple(assign[q] for q in positions))

    # m = 2: face minors avoiding the pivot, coefficient 2.
    for k, l in itertools.combinations(others, 2):
        outside = [q for q in positions if q not in (k, l)]
        for sig in itertools.product((0, 1), repeat=n - 2):
            base = dict(zip(outside, sig))
            form = QuadraticForm([
                (1, offset({**base, k: 0, l: 0}), offset({**base, k: 1, l: 1})),
                (-1, offset({**base, k: 0, l: 1}), offset({**base, k: 1, l: 0})),
            ]).canonical()
            terms.append((Fraction(2), form))

    # m >= 3 with varying set avoiding the pivot: single squared minors.
    for m in range(3, n):
        for subset in itertools.combinations(others, m):
            outside = [q for q in positions if q not in subset]
            for sig in itertools.product((0, 1), repeat=n - m):
                base = dict(zip(outside, sig))
                for k in subset:
                    rest = [q for q in subset if q != k]
                    for r in itertools.product((0, 1), repeat=m - 1):
                        if r[0] == 1:
                            continue  # {r, ~r} give the same minor
                        nr = _complement(r)
                        form = QuadraticForm([
                            (1, offset({**base, k: 0, **dict(zip(rest, r))}),
                             offset({**base, k: 1, **dict(zip(rest, nr))})),
                            (-1, offset({**base, k: 1, **dict(zip(rest, r))}),
                             offset({**base, k: 0, **dict(zip(rest, nr))})),
                        ]).canonical()
                        terms.append((Fraction(1), form))

    # m >= 3 with the pivot in the varying set: recursive 4-term squares.
    for m in range(3, n + 1):
        for rest in itertools.combinations(others, m - 1):
            outside = [q for q in positions if q != p0 and q not in rest]
            for sig in itertools.product((0, 1), repeat=n - m):
                base = dict(zip(outside, sig))
                for vf in _mm_vertex_forms(m):
                    entries = []
                    for x, sign in vf.items():
                        u = offset({**base, p0: 0, **dict(zip(rest, x))})
                        v = offset({**base, p0: 1, **dict(zip(rest, _complement(x)))})
                        entries.append((sign, u, v))
                    terms.append((Fraction(1), QuadraticForm(entries).canonical()))

    cert = SosCertificate(order=n, pivot=pivot, terms=tuple(terms))
    if verify and not verify_certificate(cert):
        residual = certificate_residual(cert)
        raise CertificateError(
            f"expansion mismatch for n={n} pivot={pivot}: "
            f"{residual.num_terms} residual monomials")
    return cert


def certificate_expansion(cert: SosCertificate) -> IntPolynomial:
    """Exact expansion sum of coeff * form**2 over the certificate terms."""
    total = IntPolynomial.zero()
    for coeff, form in cert.terms:
        if coeff.denominator != 1:
            raise ValueError(f"non-integer coefficient {coeff} cannot expand exactly")
        total = total + form.square() * coeff.numerator
    return total


def certificate_residual(cert: SosCertificate) -> IntPolynomial:
    return certificate_expansion(cert) - build_target(cert.order, cert.pivot)


def verify_certificate(cert: SosCertificate) -> bool:
    """Exact check: the expansion equals the target term-for-term."""
    return poly_equal(certificate_expansion(cert), build_target(cert.order, cert.pivot))


def certificate_term_count(n: int) -> int:
    """Number of squares in the constructed certificate (pivot independent)."""
    if n == 2:
        return 0  # the two Gram determinants coincide; the target is zero
    return len(build_certificate(n, 1).terms)


def formula_term_count(n: int) -> int:
    """Closed form 2^(2n-5) (3n-5) - 2^(n-3) (n^2-n-1) for the term count."""
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    val = Fraction(2) ** (2 * n - 5) * (3 * n - 5) - Fraction(2) ** (n - 3) * (n * n - n - 1)
    assert val.denominator == 1
    return int(val)


def evaluate_certificate(cert: SosCertificate, t: BinaryTensor) -> float:
    """Numeric value sum coeff * form(T)^2; equals the facet margin of T."""
    if t.order != cert.order:
        raise ValueError(f"tensor order {t.order} != certificate order {cert.order}")
    x = t.entries
    return float(sum(float(c) * form.evaluate(x) ** 2 for c, form in cert.terms))


def term_weight_class(form: QuadraticForm) -> int:
    """Number of slots where the two indices of the form's monomials differ."""
    _, i, j = form.terms[0]
    return bin(i ^ j).count("1")


def certificate_to_json(cert: SosCertificate) -> dict:
    return {
        "n": cert.order,
        "pivot": cert.pivot,
        "terms": [
            {
                "coeff": str(coeff),
                "form": [
                    {"sign": sign,
                     "i": list(index_from_offset(i, cert.order)),
                     "j": list(index_from_offset(j, cert.order))}
                    for sign, i, j in form.terms
                ],
            }
            for coeff, form in cert.terms
        ],
    }


def certificate_from_json(data: dict) -> SosCertificate:
    try:
        n = int(data["n"])
        pivot = int(data["pivot"])
        terms = []
        for item in data["terms"]:
            coeff = Fraction(item["coeff"])
            if coeff <= 0:
                raise ValueError(f"coefficients must be positive, got {coeff}")
            form = QuadraticForm([
                (int(entry["sign"]),
                 offset_from_index(entry["i"]),
                 offset_from_index(entry["j"]))
                for entry in item["form"]
            ])
            terms.append((coeff, form))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed certificate JSON: {exc}") from exc
    return SosCertificate(order=n, pivot=pivot, terms=tuple(terms))


def _parse_reference(spec_terms: Sequence[tuple[int, Sequence[str]]]) -> tuple:
    out = []
    for coeff, monomials in spec_terms:
        entries = []
        for token in monomials:
            sign = 1 if token[0] == "+" else -1
            i_bits, j_bits = token[1:].split(".")
            entries.append((sign,
                            offset_from_index(tuple(int(b) for b in i_bits)),
                            offset_from_index(tuple(int(b) for b in j_bits))))
        out.append((Fraction(coeff), QuadraticForm(entries)))
    return tuple(out)


# Hand-checked reference decompositions, kept verbatim as regression fixtures.
_REFERENCE_N3 = (
    (2, ("+000.011", "-010.001")),
    (2, ("+100.111", "-110.101")),
    (1, ("+010.101", "+001.110", "-011.100", "-000.111")),
)

_REFERENCE_N4 = (
    # two-slot blocks, coefficient 2
    (2, ("+0000.0011", "-0001.0010")),
    (2, ("+0000.0101", "-0100.0001")),
    (2, ("+0000.0110", "-0010.0100")),
    (2, ("+1000.1011", "-1001.1010")),
    (2, ("+1000.1101", "-1100.1001")),
    (2, ("+1000.1110", "-1010.1100")),
    (2, ("+0100.0111", "-0101.0110")),
    (2, ("+0010.0111", "-0110.0011")),
    (2, ("+0001.0111", "-0011.0101")),
    (2, ("+1100.1111", "-1101.1110")),
    (2, ("+1010.1111", "-1110.1011")),
    (2, ("+1001.1111", "-1011.1101")),
    # three-slot blocks
    (1, ("+0100.1010", "+0010.1100", "-0110.1000", "-0000.1110")),
    (1, ("+0101.1011", "+0011.1101", "-0111.1001", "-0001.1111")),
    (1, ("+0010.1001", "+0001.1010", "-0011.1000", "-0000.1011")),
    (1, ("+0110.1101", "+0101.1110", "-0111.1100", "-0100.1111")),
    (1, ("+0100.1001", "+0001.1100", "-0101.1000", "-0000.1101")),
    (1, ("+0110.1011", "+0011.1110", "-0111.1010", "-0010.1111")),
    (1, ("+0000.0111", "-0001.0110")),
    (1, ("+0000.0111", "-0010.0101")),
    (1, ("+0000.0111", "-0100.0011")),
    (1, ("+1000.1111", "-1001.1110")),
    (1, ("+1000.1111", "-1010.1101")),
    (1, ("+1000.1111", "-1100.1011")),
    (1, ("+0001.0110", "-0011.0100")),
    (1, ("+0001.0110", "-0101.0010")),
    (1, ("+0010.0101", "-0100.0011")),
    (1, ("+1001.1110", "-1011.1100")),
    (1, ("+1001.1110", "-1101.1010")),
    (1, ("+1010.1101", "-1100.1011")),
    # four-slot block
    (1, ("+0010.1101", "+0111.1000", "-0011.1100", "-0110.1001")),
    (1, ("+0000.1111", "-0001.1110", "-0100.1011", "+0101.1010")),
    (1, ("+0000.1111", "+0111.1000", "-0010.1101", "-0101.1010")),
    (1, ("+0100.1011", "+0011.1100", "-0001.1110", "-0110.1001")),
)


def reference_certificate_n3() -> SosCertificate:
    """Known 3-term decomposition at order 3, pivot 1 (regression fixture)."""
    return SosCertificate(order=3, pivot=1, terms=_parse_reference(_REFERENCE_N3))


def reference_certificate_n4() -> SosCertificate:
    """Known 34-term decomposition at order 4, pivot 1 (regression fixture)."""
    return SosCertificate(order=4, pivot=1, terms=_parse_reference(_REFERENCE_N4))
