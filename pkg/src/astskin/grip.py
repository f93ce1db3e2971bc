"""Grip-force sizing and the deadband grip-width controller."""

from dataclasses import dataclass, replace

from .errors import ConfigError, DomainError, SafetyAbort

G = 9.81
SAFE_PEDUNCLE_FORCE = 10.0  # N

BELOW, WITHIN, ABOVE = "below", "within", "above"
CLOSE, HOLD, OPEN = "close", "hold", "open"
_DECISION = {BELOW: CLOSE, WITHIN: HOLD, ABOVE: OPEN}


@dataclass(frozen=True)
class GripSizing:
    m: float          # kg
    a: float = 0.0    # m/s^2, peak manipulator acceleration
    mu: float = 0.5
    S: float = 2.0
    g: float = G

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("mass must be non-negative")
        if self.mu <= 0:
            raise DomainError("friction coefficient must be positive")
        if self.S < 1:
            raise DomainError("safety factor must be >= 1")
        if self.g + self.a <= 0:
            raise DomainError("g + a must be positive")


def required_grip_force(sizing: GripSizing) -> float:
    """Net grip force (N) needed to hold mass ``m`` under acceleration ``a``."""
    if sizing.mu <= 0:
        raise DomainError("friction coefficient must be positive")
    return sizing.m * (sizing.g + sizing.a) * sizing.S / sizing.mu


@dataclass(frozen=True)
class ControllerConfig:
    f_d: float = 2.0        # N, target force read from the sensing finger
    epsilon: float = 0.1    # N, deadband half-width
    sigma_h: float = 1.0    # mm, width step
    g_min: float = -20.0    # mm
    g_max: float = 20.0     # mm
    f_abort: float = SAFE_PEDUNCLE_FORCE

    def __post_init__(self):
        if self.epsilon <= 0 or self.sigma_h <= 0:
            raise ConfigError("epsilon and sigma_h must be positive")
        if self.g_min >= self.g_max:
            raise ConfigError("g_min must be below g_max")
        if self.f_abort <= self.f_d + self.epsilon:
            raise ConfigError("f_abort must exceed f_d + epsilon")


@dataclass(frozen=True)
class ControllerState:
    g_t: float
    last_decision: str = HOLD


def deadband_status(f_m, cfg: ControllerConfig = ControllerConfig()):
    """Classify a force reading against ``[f_d - eps, f_d + eps]``; the edges count as within."""
    if f_m < cfg.f_d - cfg.epsilon:
        return BELOW
    if f_m > cfg.f_d + cfg.epsilon:
        return ABOVE
    return WITHIN


def controller_step(state: ControllerState, f_m, cfg: ControllerConfig = ControllerConfig()):
    """One width update: close below the deadband, hold inside, open above.

    Raises :class:`SafetyAbort` when ``f_m`` exceeds ``cfg.f_abort``.
    """
    if f_m < 0:
        raise DomainError(f"measured force must be non-negative, got {f_m}")
    if f_m > cfg.f_abort:
        raise SafetyAbort(f"measured force {f_m:.3f} N exceeds abort limit {cfg.f_abort} N", force=f_m)
    decision = _DECISION[deadband_status(f_m, cfg)]
    g = state.g_t
    if decision == CLOSE:
        g -= cfg.sigma_h
    elif decision == OPEN:
        g += cfg.sigma_h
    g = min(max(g, cfg.g_min), cfg.g_max)
    return replace(state, g_t=g, last_decision=decision)
