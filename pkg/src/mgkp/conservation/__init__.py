from .fields import F_CHOICES, AnalyticField, FChoice, f_choice
from .identity import (first_variation, multiplier_check, offshell_residual,
                       verification_report, verify_id)
from .laws import (IDS, MULTIPLIER_OF, CLawTriple, InapplicableError, Multiplier,
                   applicability, equation_lhs_G, multiplier, params_for, triple)
from .integrals import (KINDS, MOMENT_REQUIRES, ChargeResult, ConstraintReport, conserved_integral,
                        constraint_diagnostics, mass_charge_fluxes, moment_relation_residual,
                        potential_v, rectangle, topological_charge)
