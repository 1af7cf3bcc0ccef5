"""Modified generalized KP equation: travelling waves, kinematics,
conservation laws and a pseudo-spectral solver."""
from .params import (OutsideEquationDomain, ParameterError, RawCoefficients, ScaledParams,
                     normalize)

__version__ = "0.1.0"

__all__ = ["OutsideEquationDomain", "ParameterError", "RawCoefficients", "ScaledParams",
           "normalize", "__version__"]
