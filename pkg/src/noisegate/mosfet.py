"""Square-law behavioral MOSFET model.

Stands in for a foundry-accurate device model: the comparative behavior
of the gate schemes depends on topology, not on short-channel effects.
Channel-length modulation multiplies both operating regions so current
and its first derivative stay continuous at the triode/saturation
boundary, which keeps Newton iterations well behaved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .netlist import DeviceKind


@dataclass(frozen=True)
class DeviceModelParams:
    vdd: float = 1.0
    vth_n: float = 0.3
    vth_p: float = -0.3
    k_n: float = 200e-6          # unit NMOS transconductance, A/V^2
    pmos_ratio: float = 0.5      # k_p/k_n, applied on top of device strength
    lam: float = 0.1             # channel-length modulation, 1/V
    temp_c: float = 25.0         # informational

    def __post_init__(self):
        if not self.vdd > 0:
            raise ValueError("vdd must be positive")
        if not 0 < self.vth_n < self.vdd:
            raise ValueError("vth_n must lie in (0, vdd)")
        if not self.vth_p < 0:
            raise ValueError("vth_p must be negative")
        if not self.k_n > 0:
            raise ValueError("k_n must be positive")
        if self.lam < 0:
            raise ValueError("lam must be non-negative")


def _square_law(vgs: float, vds: float, vth: float, k: float, lam: float) -> float:
    """Drain current of an n-type device with vds >= 0."""
    vov = vgs - vth
    if vov <= 0.0:
        return 0.0
    clm = 1.0 + lam * vds
    if vds >= vov:
        return 0.5 * k * vov * vov * clm
    return k * (vov * vds - 0.5 * vds * vds) * clm


def _nmos_like(v_gs: float, v_ds: float, vth: float, k: float, lam: float) -> float:
    if v_ds < 0:
        # swap roles: the lower terminal acts as the source
        return -_square_law(v_gs - v_ds, -v_ds, vth, k, lam)
    return _square_law(v_gs, v_ds, vth, k, lam)


def mosfet_current(p: DeviceModelParams, kind: DeviceKind, strength: float,
                   v_gs: float, v_ds: float) -> float:
    """Channel current flowing drain to source.

    Positive for a conducting NMOS with v_ds > 0.  A negative v_ds is
    handled by source/drain symmetry (the physically lower terminal
    acts as the source), so the current is continuous and odd around
    v_ds = 0.  PMOS mirrors the NMOS equations with negated voltages
    and the pmos_ratio transconductance scale.
    """
    if not (math.isfinite(v_gs) and math.isfinite(v_ds)):
        raise ValueError("voltages must be finite")
    if kind is DeviceKind.PMOS:
        return -_nmos_like(-v_gs, -v_ds, -p.vth_p,
                           p.k_n * p.pmos_ratio * strength, p.lam)
    if kind is not DeviceKind.NMOS:
        raise ValueError(f"not a MOSFET kind: {kind}")
    return _nmos_like(v_gs, v_ds, p.vth_n, p.k_n * strength, p.lam)
