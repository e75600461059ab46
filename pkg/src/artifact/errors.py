"""Exception types raised by the bounds library."""


class VeBoundsError(Exception):
    """Base class for every error raised by this package."""


class EmptyArm(VeBoundsError):
    """One randomization arm carries no observations."""


class MixedSchema(VeBoundsError):
    """Records disagree on whether the adverse-event indicator S is present."""


class PositivityError(VeBoundsError):
    """A conditioning cell required by the scenario has probability zero."""


class Infeasible(VeBoundsError):
    """The observed constraints admit no response-type distribution."""


class ZeroDenominator(VeBoundsError):
    """A plug-in formula would divide by an estimated probability of zero."""


class DegenerateDenominator(ZeroDenominator):
    """The denominator of a ratio program can reach zero on its feasible set."""


class TooManyFailures(VeBoundsError):
    """Too many bootstrap replicates failed to produce an estimate."""
