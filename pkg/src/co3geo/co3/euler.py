"""Reduced Euler characteristic of the 2-local geometry and its 2-part.

The geometry is flag-transitive on each of the seven nonempty flag
types, so the alternating sum of orbit sizes -- group order divided by
the verified flag stabilizer orders -- gives the reduced Euler
characteristic exactly.  The reduced homology is projective relative to
a family of at most 2^3 subgroups in each of three classes, which
forces the 2-part of the characteristic to be exactly 2^7.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..complexes import euler_by_orbit_counting
from .context import GROUP_ORDER
from .verify import Table1Result, VerifyError

EXPECTED_EULER = 50_378_624
EXPECTED_TWO_ADIC_VALUATION = 7

_FLAG_TYPES = (("p",), ("L",), ("M",), ("p", "L"), ("p", "M"),
               ("L", "M"), ("p", "L", "M"))


@dataclass
class EulerReport:
    euler_reduced: int
    orbit_sizes: dict
    two_adic_valuation: int
    odd_part: int
    fixed_complex_euler: int | None

    @property
    def all_ok(self) -> bool:
        ok = (self.euler_reduced == EXPECTED_EULER
              and self.two_adic_valuation == EXPECTED_TWO_ADIC_VALUATION)
        if self.fixed_complex_euler is not None:
            ok = ok and self.fixed_complex_euler == 0
        return ok


def euler_characteristic(table1: Table1Result,
                         fixed_complex_euler: int | None = None) -> EulerReport:
    stab = table1.stabilizer_orders
    flags = {f: stab["".join(f)] for f in _FLAG_TYPES}
    chi = euler_by_orbit_counting(flags, GROUP_ORDER)
    if chi != EXPECTED_EULER:
        raise VerifyError(f"reduced Euler characteristic {chi}")
    v2 = 0
    odd = chi
    while odd % 2 == 0:
        odd //= 2
        v2 += 1
    return EulerReport(
        euler_reduced=chi,
        orbit_sizes={f: GROUP_ORDER // stab["".join(f)] for f in _FLAG_TYPES},
        two_adic_valuation=v2,
        odd_part=odd,
        fixed_complex_euler=fixed_complex_euler,
    )
