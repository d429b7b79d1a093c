"""Exact generators and repetition analysis for digit sequences."""

from .words import (Alphabet, InvalidExponent, InvalidWord, MaxPower,
                    SequenceSource, Word, fractional_power, is_prefix,
                    max_power_at)
from .automata import AutomatonParseError, KAutomaton, THUE_MORSE, generate, run, \
    to_uniform_morphism
from .morphisms import (FiniteImage, GrowthTable, Morphism,
                        MorphismParseError, NotProlongable, Recurrence,
                        fixed_point, growth_table, is_prolongable,
                        morphic_image, mortal_letters, recurrence_status)
from .complexity import (ComplexityProfile, WindowTooShort,
                         complexity_profile, detect_eventual_period,
                         factor_count)
from .stammer import (ExtractionBug, ExtractionTrace, NoRepeat,
                      NotApplicable, StammerWitness, WitnessSequence,
                      extract_witness, pigeonhole_repeat, verify_witness,
                      witness_hunt, witnesses_for_automatic,
                      witnesses_for_morphic)
from .expansions import (AlgebraicIntegerSpec, AmbiguousFloor, BetaOrbit,
                         Classification, HenselExpansion, QuadraticField,
                         QuadraticFieldElement, RationalNumber,
                         UndecidedPrecision, b_adic_digits, beta_expansion,
                         beta_orbit_period, classify_algebraic_integer,
                         hensel_digits, lacunary_digits, pattern_count_digits,
                         periodic_beta_value)
from .approximants import (AgreementReport, HenselApproximant,
                           InsufficientDigits, NeedMoreDigits,
                           PeriodicApproximant, RadicalValue,
                           SubspaceAuditReport, agreement_length,
                           approximant_vector, build_polynomial,
                           criterion_report, hensel_approximant,
                           periodic_approximant, periodize,
                           place_absolute_values, product_over_places,
                           subspace_audit, vector_height)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
