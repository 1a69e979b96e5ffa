"""Exception hierarchy shared by all wsim modules."""


class WSimError(Exception):
    """Base class for every error raised by wsim."""


class InvalidRegisterError(WSimError, ValueError):
    pass


class UnitarityError(WSimError, ValueError):
    def __init__(self, deviation: float):
        super().__init__(f"gate is not unitary: ||G^dag G - I||_max = {deviation:.3e}")
        self.deviation = deviation


class ConvergenceError(WSimError, ArithmeticError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class DegenerateProtocolError(WSimError, ValueError):
    pass


class ConstructionError(WSimError, ArithmeticError):
    pass


class InfeasibleTargetError(WSimError, ValueError):
    pass
