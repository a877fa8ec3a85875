"""Gate-to-pulse compiler for the capacitively coupled two-qubit device.

Translates abstract gate requests (x/y/z rotations, zz phase blocks, CNOT)
into physical ``PulseSegment`` schedules.  The only physical knobs are the
level settings Delta_1, Delta_2 and the drive strengths a_1, a_2; the
coupling Delta_12 is a device constant that can never be switched off, which
shapes the whole design:

* Virtual z policy: z rotations are never emitted as physical segments.
  They accumulate in a ``PhaseLedger`` and are discharged by the detuning
  choice of the next phase block.  The ledger keeps two separate streams:
  gate content (virtual z requests, which surface in the delivering block's
  intended unitary) and coupling surplus (the deterministic z/zz phases,
  Delta_12 t / 2 each, that the always-present coupling accrues during
  rotation segments; blocks cancel these physically and they never appear in
  intended unitaries).  The split keeps composed intended unitaries equal to
  the requested ideal product at any coupling strength.
* Phase blocks: with drives off (gated mode) the Hamiltonian is diagonal,
  so a block of duration t delivers exact z angles 2 (Delta_i + Delta_12/4) t
  and a zz angle Delta_12 t / 2.  The block duration is fixed by the zz
  target; the two detunings then solve the z targets in closed form.
* Drive modes: ``gated`` switches drives off outside rotations.
  ``always_on`` keeps both drives running, so undriven qubits must be parked
  at large detuning.  Parking is where an always-on drive leaves its
  fingerprint; see the parking helpers below for the strategy (full-cycle
  parking for rotation spectators, an exact phase solve for the block's
  target qubit, and the mod-2pi accrual equation with flip caps for the
  block's control qubit).  The control's accrual equation books the bare
  detuning phase, not the drive-dressed one, and the difference -- the
  drive-induced level shift integrated over the block -- is the dominant,
  intentionally unmodeled always-on phase error.

The CNOT sequence is the NMR-style decomposition: x(-pi/2) on the target, a
phase block (-pi/2, +pi/2, +pi/2), x(+pi/2) on the target, and a closing
block (0, +pi/2, +pi/2).  The closing block's angles fold in the virtual-z
brackets that turn bare x rotations into y rotations; the composition is
checked against the ideal CNOT by ``verify_schedule`` and the
ideal-composition oracle rather than assumed.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .evolution import PulseSegment, Schedule, propagate
from .hamiltonian import DeviceParams
from .linalg import distance_up_to_global_phase, wrap_angle

__all__ = [
    "CompilationError",
    "GateSpec",
    "PhaseLedger",
    "CompiledGate",
    "ideal_gate",
    "ideal_composition",
    "ledger_discharge_unitary",
    "compile_x_rotation",
    "compile_y_rotation",
    "compile_z_rotation",
    "compile_phase_block",
    "compile_cnot_gates",
    "compile_cnot",
    "compile_schedule",
    "verify_schedule",
]

MODES = ("gated", "always_on")
GATE_KINDS = ("rx", "ry", "rz", "zz", "cnot")

# Parked qubits must sit at least this many drive strengths away from
# resonance (in units of their own a).
DEFAULT_PARKING_FLOOR = 10.0
# Always-on admissibility caps: maximum tolerated spin-flip probability of a
# parked qubit per block (evaluated on both neighbor-state branches) and
# maximum leakage of the exactly solved qubit.
_FLIP_CAP = 1e-3
_LEAK_CAP = 1e-3
# Minimum separation between the two parked detunings, in drive units, to
# stay clear of two-qubit flip-flop and double-excitation resonances.
_SEPARATION_MIN = 2.0
# Search bounds for the mod-2pi parking equations.
_K_MAX = 10**6
_MAX_PHASE_BRANCHES = 400

_TWO_PI = 2.0 * math.pi
_HALF_PI = math.pi / 2.0


class CompilationError(ValueError):
    """A gate request cannot be realized on the given device/mode."""


def _require_finite(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value)):
        raise ValueError(f"{name} must be a finite real number, got {value!r}")


def _require_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _require_qubit(qubit):
    if qubit not in (1, 2):
        raise ValueError(f"qubit must be 1 or 2, got {qubit!r}")


@dataclass(frozen=True)
class GateSpec:
    """One abstract gate request.

    Kinds: ``rx``/``ry``/``rz`` (qubit and angle required), ``zz`` (angle
    only) and ``cnot`` (control is qubit 1, target qubit 2, no parameters).
    Conventions: R_n(theta) = exp(-i (theta/2) sigma_n), U_zz(theta) =
    exp(-i (theta/2) sigma_z^1 sigma_z^2); angles in radians.
    """

    kind: str
    qubit: int = None
    angle: float = None

    def __post_init__(self):
        kind = str(self.kind).lower()
        object.__setattr__(self, "kind", kind)
        if kind not in GATE_KINDS:
            raise ValueError(f"gate kind must be one of {GATE_KINDS}, got {self.kind!r}")
        if kind in ("rx", "ry", "rz"):
            _require_qubit(self.qubit)
            _require_finite("angle", self.angle)
        elif kind == "zz":
            if self.qubit is not None:
                raise ValueError("zz gates act on both qubits; qubit must be None")
            _require_finite("angle", self.angle)
        else:  # cnot
            if self.qubit is not None or self.angle is not None:
                raise ValueError("cnot takes no qubit or angle parameters")


@dataclass(frozen=True)
class PhaseLedger:
    """Deferred-phase bookkeeping threaded through compilation (a value, not
    shared state).

    Two separate streams are tracked, because they live at different layers:

    * ``pending_z1``/``pending_z2`` -- gate content: virtual R_z requests not
      yet delivered.  ``request_z`` subtracts the requested angle (pending is
      the angle delivered ahead of requests, so owing a rotation makes it
      negative).  The next phase block delivers the balance physically AND
      shows it in its intended unitary: this is where a virtual z becomes
      part of the ideal composition.
    * ``surplus_z1``/``surplus_z2``/``pending_zz`` -- coupling surplus: the
      deterministic extra z and zz phase (Delta_12 t / 2 each) that a drive
      segment accrues because the coupling cannot be gated off.  The next
      block cancels it physically but it never appears in any intended
      unitary -- it is error compensation, not gate content.

    ``global_phase`` is a diagnostic scalar (the identity-term phase), never
    corrected physically.  Angles are stored unreduced; read them through
    ``wrapped_pending`` / ``wrapped_pending_zz`` for (-pi, pi]
    representatives of the physically owed totals.
    """

    pending_z1: float = 0.0
    pending_z2: float = 0.0
    pending_zz: float = 0.0
    global_phase: float = 0.0
    surplus_z1: float = 0.0
    surplus_z2: float = 0.0

    def __post_init__(self):
        for name in ("pending_z1", "pending_z2", "pending_zz", "global_phase",
                     "surplus_z1", "surplus_z2"):
            _require_finite(name, getattr(self, name))

    def request_z(self, qubit, angle):
        """Record a virtual R_z(angle) on a qubit; returns the new ledger."""
        _require_qubit(qubit)
        _require_finite("angle", angle)
        if qubit == 1:
            return replace(self, pending_z1=self.pending_z1 - angle)
        return replace(self, pending_z2=self.pending_z2 - angle)

    def wrapped_pending(self, qubit):
        """Wrapped total z angle owed to a qubit (content plus surplus)."""
        _require_qubit(qubit)
        if qubit == 1:
            return wrap_angle(self.pending_z1 + self.surplus_z1)
        return wrap_angle(self.pending_z2 + self.surplus_z2)

    @property
    def wrapped_pending_zz(self):
        return wrap_angle(self.pending_zz)

    @property
    def is_phase_neutral(self):
        """True when every stream is an exact multiple of 2 pi on its own."""
        return (
            wrap_angle(self.pending_z1) == 0.0
            and wrap_angle(self.pending_z2) == 0.0
            and wrap_angle(self.surplus_z1) == 0.0
            and wrap_angle(self.surplus_z2) == 0.0
            and self.wrapped_pending_zz == 0.0
        )


@dataclass(frozen=True)
class CompiledGate:
    """The physical realization of one gate request: emitted segments, the
    gate's contribution to the ideal composition at this time slot, and the
    ledger after compilation.  Virtual z content contributes at the block
    that delivers it, so a bare rz shows the identity here."""

    segments: tuple
    intended_unitary: np.ndarray
    ledger_after: PhaseLedger

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        u = np.asarray(self.intended_unitary, dtype=complex)
        object.__setattr__(self, "intended_unitary", u)
        dev = np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]))
        if dev > 1e-12:
            raise ValueError(f"intended unitary fails unitarity by {dev:.3e}")


# ---------------------------------------------------------------------------
# Ideal (noise-free) gate matrices
# ---------------------------------------------------------------------------

def _rotation_2x2(kind, angle):
    c = math.cos(angle / 2.0)
    s = math.sin(angle / 2.0)
    if kind == "rx":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == "ry":
        return np.array([[c, -s], [s, c]], dtype=complex)
    # rz
    return np.array([[np.exp(-1j * angle / 2.0), 0.0], [0.0, np.exp(1j * angle / 2.0)]])


def ideal_gate(g: GateSpec):
    """Exact 4x4 matrix of a gate request in the fixed product basis.

    CNOT is the pure permutation |1>|1> <-> |1>|0> (no scalar prefactor);
    rotations follow the exponential conventions stated on ``GateSpec``.
    """
    if g.kind == "cnot":
        return np.array(
            [
                [0, 1, 0, 0],
                [1, 0, 0, 0],
                [0, 0, 1, 0],
                [0, 0, 0, 1],
            ],
            dtype=complex,
        )
    if g.kind == "zz":
        half = g.angle / 2.0
        lo = np.exp(-1j * half)
        hi = np.exp(1j * half)
        return np.diag([lo, hi, hi, lo])
    r = _rotation_2x2(g.kind, g.angle)
    eye = np.eye(2, dtype=complex)
    return np.kron(r, eye) if g.qubit == 1 else np.kron(eye, r)


def _block_unitary(theta_z1, theta_z2, theta_zz):
    """Ideal diagonal unitary of a phase block: Rz1 Rz2 Uzz of the given
    angles (all diagonal, so order is immaterial)."""
    u = ideal_gate(GateSpec("rz", 1, theta_z1))
    u = u @ ideal_gate(GateSpec("rz", 2, theta_z2))
    return u @ ideal_gate(GateSpec("zz", angle=theta_zz))


def ideal_composition(gates):
    """Product of the intended unitaries of compiled gates in time order."""
    u = np.eye(4, dtype=complex)
    for g in gates:
        u = g.intended_unitary @ u
    return u


def ledger_discharge_unitary(ledger: PhaseLedger):
    """Ideal unitary owed by the ledger's undelivered gate content.

    Content pendings are gate requests delivered ahead (negative when owed),
    so the settlement is R_z(-pending) per qubit.  Coupling surpluses are
    physical compensation, not gate content, and are excluded: composing this
    with the intended unitaries audits a gate sequence at the ideal layer.
    """
    return _block_unitary(
        -wrap_angle(ledger.pending_z1),
        -wrap_angle(ledger.pending_z2),
        0.0,
    )


# ---------------------------------------------------------------------------
# Always-on parking helpers
# ---------------------------------------------------------------------------
# An undriven-but-driven qubit (drive on, meant to idle) evolves under
# D sigma_z + a sigma_x with D its effective detuning.  Over a time t it
# flips with probability (a/Omega)^2 sin^2(Omega t) and acquires a z phase
# angle theta_phys = -2 arg U_00, where Omega = sqrt(D^2 + a^2).  The helpers
# below choose D.


def _leakage(detuning, a, t):
    """Spin-flip probability of a parked qubit after time t."""
    om = math.hypot(detuning, a)
    if om == 0.0:
        return 0.0
    ratio = a / om
    return ratio * ratio * math.sin(om * t) ** 2


def _phase_unwrapped(detuning, a, t):
    """Accumulated z-phase angle of the parked evolution, unwrapped.

    Writing U_00 = e^{-i Omega t} (cos^2 + (D/Omega) sin^2 ... ) in the
    rotating frame of Omega, the returned value F(D) = 2 Omega t - 2 arg(z)
    with z = e^{i Omega t} U_00 is continuous and strictly increasing in
    D > 0, and F mod 2 pi equals the physical z angle.  Solving on F instead
    of the wrapped angle keeps bisection away from branch cuts even when the
    drive-induced shift spans many turns.
    """
    om = math.hypot(detuning, a)
    wt = om * t
    c = math.cos(wt)
    s = math.sin(wt)
    re = c * c + (detuning / om) * s * s
    im = s * c * (1.0 - detuning / om)
    return 2.0 * om * t - 2.0 * math.atan2(im, re)


def _exact_detuning(beta, a, t, shift, floor_abs, leak_cap):
    """Effective detuning delivering z angle beta (mod 2 pi) exactly under an
    active drive, with |delta| >= floor_abs and leakage <= leak_cap.

    Solves F(D) = beta + 2 pi m by bisection on the unwrapped phase, walking
    branches m outward on both signs of D (the phase is odd in D); the first
    admissible root wins.  The returned value is the detuning delta relative
    to the coupling shift: D = delta + shift.
    """

    # A solution has leakage ~ (a/Omega)^2 sin^2(beta/2); start the walk at
    # the radius where that can pass the cap instead of crawling to it.
    om_req = a * abs(math.sin(beta / 2.0)) / math.sqrt(leak_cap)
    d_req = math.sqrt(max(om_req * om_req - a * a, 0.0)) * 0.999

    def side_roots(beta_side):
        lo = max(floor_abs + abs(shift) + 0.05 * a, d_req)
        m = math.ceil((_phase_unwrapped(lo, a, t) - beta_side) / _TWO_PI)
        for _ in range(_MAX_PHASE_BRANCHES):
            y = beta_side + _TWO_PI * m
            if _phase_unwrapped(lo, a, t) > y:
                m += 1
                continue
            hi = lo
            while _phase_unwrapped(hi, a, t) < y:
                hi += math.pi / t
            b_lo, b_hi = lo, hi
            for _ in range(90):
                mid = 0.5 * (b_lo + b_hi)
                if _phase_unwrapped(mid, a, t) < y:
                    b_lo = mid
                else:
                    b_hi = mid
            root = 0.5 * (b_lo + b_hi)
            yield root
            m += 1
            lo = root

    positive = side_roots(beta)
    negative = side_roots(-beta)
    try:
        for _ in range(_MAX_PHASE_BRANCHES):
            for sign, roots in ((1.0, positive), (-1.0, negative)):
                d_eff = next(roots)
                delta = sign * d_eff - shift
                if abs(delta) < floor_abs:
                    continue
                if _leakage(sign * d_eff, a, t) <= leak_cap:
                    return delta
    except StopIteration:
        pass
    raise CompilationError(
        f"no exact parking detuning found (target angle {beta:.4f} rad, "
        f"duration {t:.4f}, floor {floor_abs:.4f}, leak cap {leak_cap:g})"
    )


def _booked_candidates(theta, t, shift, floor_abs):
    """Detunings solving the bare accrual equation 2 (delta + shift) t ==
    theta (mod 2 pi) with |delta| >= floor_abs, nearest-first on both signs."""
    k_up = math.ceil(((floor_abs + shift) * 2.0 * t - theta) / _TWO_PI)
    k_down = math.floor(((-floor_abs + shift) * 2.0 * t - theta) / _TWO_PI)
    for i in range(_K_MAX):
        for k in (k_up + i, k_down - i):
            delta = (theta + _TWO_PI * k) / (2.0 * t) - shift
            if abs(delta) >= floor_abs:
                yield delta


def _full_cycle_parking(a, t, shift, floor_abs):
    """Detuning parking a rotation spectator on an exact generalized-Rabi
    cycle: Omega t = m pi gives zero flip probability and zero net z phase,
    independent of the drive.  Picks the smallest such m above the floor."""
    om_min = math.hypot(floor_abs + 0.5 * a + abs(shift), a)
    m = math.ceil(om_min * t / math.pi)
    om = math.pi * m / t
    return math.sqrt(om * om - a * a) - shift


# ---------------------------------------------------------------------------
# Gate compilers
# ---------------------------------------------------------------------------

def compile_x_rotation(qubit, angle, device: DeviceParams, mode,
                       ledger: PhaseLedger = None,
                       parking_floor=DEFAULT_PARKING_FLOOR):
    """Compile R_x(angle) on one qubit into a resonant drive segment.

    The driven qubit sits at Delta = 0 with its device drive strength for a
    duration t = theta / (2 a), negative angles realized as theta + 2 pi
    (durations are the only knob and must be positive).  In gated mode the
    spectator is fully idle; in always-on mode it keeps its drive and is
    parked on a full generalized-Rabi cycle.  The ledger books the coupling
    surplus accrued during the segment.
    """
    _require_qubit(qubit)
    _require_mode(mode)
    _require_finite("angle", angle)
    if not (-_TWO_PI < angle <= _TWO_PI):
        raise CompilationError(
            f"rotation angle must lie in (-2 pi, 2 pi], got {angle}"
        )
    if ledger is None:
        ledger = PhaseLedger()
    intended = ideal_gate(GateSpec("rx", qubit, angle))
    if angle == 0.0:
        return CompiledGate((), intended, ledger)

    a_drive = device.q1.a if qubit == 1 else device.q2.a
    if a_drive <= 0.0:
        raise CompilationError(
            f"qubit {qubit} has no drive (a = 0); x rotation unreachable"
        )
    theta_pos = angle if angle > 0.0 else angle + _TWO_PI
    t = theta_pos / (2.0 * a_drive)

    deltas = [0.0, 0.0]
    amps = [0.0, 0.0]
    amps[qubit - 1] = a_drive
    spectator = 2 if qubit == 1 else 1
    a_spec = device.q1.a if spectator == 1 else device.q2.a

    surplus = device.delta12 * t / 2.0
    surp = {1: ledger.surplus_z1, 2: ledger.surplus_z2}
    if mode == "always_on" and a_spec > 0.0:
        amps[spectator - 1] = a_spec
        deltas[spectator - 1] = _full_cycle_parking(
            a_spec, t, device.delta12 / 4.0, parking_floor * a_spec
        )
        # The full cycle nulls the spectator's net z phase, so only the
        # driven qubit books surplus.
        surp[qubit] += surplus
    else:
        surp[1] += surplus
        surp[2] += surplus

    segment = PulseSegment(
        duration=t,
        delta1=deltas[0],
        delta2=deltas[1],
        a1=amps[0],
        a2=amps[1],
        label=f"rx(q{qubit},{angle:.6g})",
    )
    after = replace(
        ledger,
        surplus_z1=surp[1],
        surplus_z2=surp[2],
        pending_zz=ledger.pending_zz + surplus,
        global_phase=ledger.global_phase - device.delta12 * t / 4.0,
    )
    return CompiledGate((segment,), intended, after)


def compile_y_rotation(qubit, angle, device: DeviceParams, mode,
                       ledger: PhaseLedger = None,
                       parking_floor=DEFAULT_PARKING_FLOOR):
    """Compile R_y(angle) = R_z(pi/2) R_x(angle) R_z(-pi/2) with the two z
    rotations folded into the ledger (virtual z); only the x segment is
    physical.  The brackets become sound once adjacent phase blocks discharge
    them at their proper time slots, as the CNOT sequence does.
    """
    if ledger is None:
        ledger = PhaseLedger()
    leading = ledger.request_z(qubit, -_HALF_PI)
    core = compile_x_rotation(qubit, angle, device, mode, leading, parking_floor)
    after = core.ledger_after.request_z(qubit, _HALF_PI)
    intended = ideal_gate(GateSpec("ry", qubit, angle))
    return CompiledGate(core.segments, intended, after)


def compile_z_rotation(qubit, angle, ledger: PhaseLedger = None):
    """Compile R_z(angle): purely virtual, no physical segments.

    The intended unitary is the identity -- the rotation exists only as
    ledger content here, and becomes part of the ideal composition at the
    phase block that delivers it (whose intended unitary shows it).  This
    keeps composed intended unitaries in one-to-one correspondence with the
    physical time line.
    """
    _require_qubit(qubit)
    _require_finite("angle", angle)
    if ledger is None:
        ledger = PhaseLedger()
    return CompiledGate((), np.eye(4, dtype=complex),
                        ledger.request_z(qubit, angle))


def compile_phase_block(theta_z1, theta_z2, theta_zz, device: DeviceParams,
                        mode, ledger: PhaseLedger = None,
                        parking_floor=DEFAULT_PARKING_FLOOR):
    """Compile one phase block delivering z angles theta_z1/theta_z2 and a zz
    angle theta_zz, absorbing all ledger pendings.

    The duration comes from the zz target: t = 2 r / |Delta_12| where r in
    (0, 2 pi] is the coupling-sign-reduced remaining zz angle; a vanishing
    remainder is promoted to a full 2 pi cycle so pure-z blocks still have
    positive duration.  Gated detunings solve the accrual equations in
    closed form, Delta_i = theta_hat_i / (2 t) - Delta_12 / 4.  Always-on
    detunings come from the parking helpers: an exact drive-aware solve for
    qubit 2 (on the qubit-1-excited branch, matching its role as the rotated
    qubit in the CNOT sequence) and the bare accrual equation with flip caps
    and a separation constraint for qubit 1.
    """
    _require_mode(mode)
    for name, value in (("theta_z1", theta_z1), ("theta_z2", theta_z2),
                        ("theta_zz", theta_zz)):
        _require_finite(name, value)
    if ledger is None:
        ledger = PhaseLedger()
    # Intended = requested angles plus any owed gate content; coupling
    # surpluses are compensated physically below but are not gate content.
    intended = _block_unitary(
        wrap_angle(theta_z1 - ledger.pending_z1),
        wrap_angle(theta_z2 - ledger.pending_z2),
        theta_zz,
    )

    if (theta_z1 == 0.0 and theta_z2 == 0.0 and theta_zz == 0.0
            and ledger.is_phase_neutral):
        return CompiledGate((), intended, ledger)
    if device.delta12 == 0.0:
        raise CompilationError(
            "coupling absent (delta12 = 0); zz angle unreachable"
        )

    d12 = device.delta12
    th1 = wrap_angle(theta_z1 - ledger.pending_z1 - ledger.surplus_z1)
    th2 = wrap_angle(theta_z2 - ledger.pending_z2 - ledger.surplus_z2)
    sign = 1.0 if d12 > 0.0 else -1.0
    reduced = (sign * (theta_zz - ledger.pending_zz)) % _TWO_PI
    if reduced == 0.0:
        reduced = _TWO_PI
    t = 2.0 * reduced / abs(d12)
    shift = d12 / 4.0

    if mode == "gated":
        delta1 = th1 / (2.0 * t) - shift
        delta2 = th2 / (2.0 * t) - shift
        amps = (0.0, 0.0)
    else:
        a1, a2 = device.q1.a, device.q2.a
        if a2 > 0.0:
            # Target the exact parked phase on the branch where qubit 1 is
            # excited (qubit-2 effective detuning delta2 + Delta_12/2 there);
            # the zz angle then lands on the complementary branch.
            beta = wrap_angle(th2 + sign * reduced)
            delta2 = _exact_detuning(
                beta, a2, t, d12 / 2.0, parking_floor * a2, _LEAK_CAP
            )
        else:
            delta2 = th2 / (2.0 * t) - shift
        if a1 > 0.0:
            sep = _SEPARATION_MIN * max(a1, a2)
            delta1 = None
            for cand in _booked_candidates(th1, t, shift, parking_floor * a1):
                if (_leakage(cand, a1, t) > _FLIP_CAP
                        or _leakage(cand + d12 / 2.0, a1, t) > _FLIP_CAP):
                    continue
                if abs(cand - delta2) < sep or abs(cand + delta2) < sep:
                    continue
                delta1 = cand
                break
            if delta1 is None:
                raise CompilationError(
                    f"no admissible always-on parking for qubit 1 within "
                    f"k <= {_K_MAX} (theta {th1:.4f} rad, duration {t:.4f}, "
                    f"floor {parking_floor * a1:.4f})"
                )
        else:
            delta1 = th1 / (2.0 * t) - shift
        amps = (a1, a2)

    segment = PulseSegment(
        duration=t,
        delta1=delta1,
        delta2=delta2,
        a1=amps[0],
        a2=amps[1],
        label=f"block({theta_z1:.4g},{theta_z2:.4g},{theta_zz:.4g})",
    )
    after = PhaseLedger(
        global_phase=ledger.global_phase - d12 * t / 4.0,
    )
    return CompiledGate((segment,), intended, after)


def compile_cnot_gates(device: DeviceParams, mode,
                       ledger: PhaseLedger = None,
                       parking_floor=DEFAULT_PARKING_FLOOR):
    """The CNOT pulse sequence as its four compiled pieces (time order).

    Control is qubit 1, target qubit 2.  The sequence is the NMR-style
    y(-90) . U . y(+90) . U' structure with the y rotations' virtual-z
    brackets folded into the two blocks' angle triples; what remains is two
    bare x pulses on the target and two phase blocks.  The closing block
    discharges all residual ledger phase.  The pieces' intended unitaries
    compose to the ideal CNOT up to a global phase (see
    ``ideal_composition``); acceptance checks that product, not this
    docstring.
    """
    _require_mode(mode)
    if device.delta12 == 0.0:
        raise CompilationError("CNOT requires a nonzero coupling delta12")
    if device.q1.a <= 0.0 or device.q2.a <= 0.0:
        raise CompilationError(
            f"CNOT requires both drives > 0, got a1={device.q1.a}, a2={device.q2.a}"
        )
    if ledger is None:
        ledger = PhaseLedger()
    g1 = compile_x_rotation(2, -_HALF_PI, device, mode, ledger, parking_floor)
    g2 = compile_phase_block(-_HALF_PI, _HALF_PI, _HALF_PI, device, mode,
                             g1.ledger_after, parking_floor)
    g3 = compile_x_rotation(2, _HALF_PI, device, mode, g2.ledger_after,
                            parking_floor)
    g4 = compile_phase_block(0.0, _HALF_PI, _HALF_PI, device, mode,
                             g3.ledger_after, parking_floor)
    return (g1, g2, g3, g4)


def compile_cnot(device: DeviceParams, mode,
                 parking_floor=DEFAULT_PARKING_FLOOR):
    """Compile the full CNOT into an executable Schedule."""
    gates = compile_cnot_gates(device, mode, None, parking_floor)
    segments = tuple(seg for g in gates for seg in g.segments)
    return Schedule(segments=segments, device=device, model="capacitive")


def compile_schedule(gates, device: DeviceParams, mode,
                     parking_floor=DEFAULT_PARKING_FLOOR):
    """Compile a list of GateSpec requests into one Schedule.

    Gates share a single ledger.  A drive segment mixes the rotation axes,
    so any pending z/zz phase must be physically settled before one starts:
    a discharge block is inserted ahead of every rx/ry/cnot whose incoming
    ledger is not phase-neutral (this is what makes a standalone ry, whose
    leading virtual-z bracket must act before its x pulse, compose soundly).
    After the last gate any residual pending phase is discharged into a
    closing block.  Returns (schedule, compiled_gates) including any
    inserted discharge blocks.
    """
    ledger = PhaseLedger()
    compiled = []
    for spec in gates:
        if not isinstance(spec, GateSpec):
            raise ValueError(f"expected GateSpec, got {spec!r}")
        if spec.kind in ("rx", "cnot") and not ledger.is_phase_neutral:
            settle = compile_phase_block(0.0, 0.0, 0.0, device, mode, ledger,
                                         parking_floor)
            compiled.append(settle)
            ledger = settle.ledger_after
        if spec.kind == "rx":
            g = compile_x_rotation(spec.qubit, spec.angle, device, mode,
                                   ledger, parking_floor)
        elif spec.kind == "ry":
            # The leading virtual-z bracket must act before the drive, so it
            # is discharged into a block of its own; the trailing bracket
            # stays pending for whatever follows.
            leading = ledger.request_z(spec.qubit, -_HALF_PI)
            settle = compile_phase_block(0.0, 0.0, 0.0, device, mode, leading,
                                         parking_floor)
            compiled.append(settle)
            core = compile_x_rotation(spec.qubit, spec.angle, device, mode,
                                      settle.ledger_after, parking_floor)
            compiled.append(core)
            ledger = core.ledger_after.request_z(spec.qubit, _HALF_PI)
            continue
        elif spec.kind == "rz":
            g = compile_z_rotation(spec.qubit, spec.angle, ledger)
        elif spec.kind == "zz":
            g = compile_phase_block(0.0, 0.0, spec.angle, device, mode,
                                    ledger, parking_floor)
        else:  # cnot
            pieces = compile_cnot_gates(device, mode, ledger, parking_floor)
            compiled.extend(pieces)
            ledger = pieces[-1].ledger_after
            continue
        compiled.append(g)
        ledger = g.ledger_after

    if not ledger.is_phase_neutral:
        closing = compile_phase_block(0.0, 0.0, 0.0, device, mode, ledger,
                                      parking_floor)
        compiled.append(closing)
        ledger = closing.ledger_after

    segments = tuple(seg for g in compiled for seg in g.segments)
    if not segments:
        raise CompilationError(
            "compiled schedule has no physical segments (only virtual gates)"
        )
    return Schedule(segments=segments, device=device, model="capacitive"), tuple(compiled)


def verify_schedule(schedule: Schedule, target, tol):
    """Check a schedule's exact propagator against a target unitary.

    Returns {'distance', 'pass', 'phase_offset'}: the global-phase-invariant
    distance, whether it meets tol, and the optimal phase arg tr(T^dagger U).
    """
    target = np.asarray(target, dtype=complex)
    if target.shape != (4, 4):
        raise ValueError(f"target must be 4x4, got shape {target.shape}")
    unit_dev = np.linalg.norm(target.conj().T @ target - np.eye(4))
    if unit_dev > 1e-10:
        raise ValueError(f"target fails unitarity by {unit_dev:.3e}")
    _require_finite("tol", tol)
    psi0 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    u = propagate(schedule, psi0).total_propagator
    distance = distance_up_to_global_phase(u, target)
    overlap = np.sum(target.conj() * u)
    phase_offset = float(np.angle(overlap)) if overlap != 0.0 else 0.0
    return {"distance": distance, "pass": distance <= tol,
            "phase_offset": phase_offset}
