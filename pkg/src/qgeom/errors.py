"""Exception hierarchy for qgeom.

Two broad families:

* ordinary errors: bad inputs, mismatched objects, exhausted searches,
  size caps.  These are recoverable conditions a caller may anticipate.
* :class:`TheoryViolation` and its subclasses: outcomes the underlying
  mathematics rules out.  Observing one means either an implementation
  bug or a genuine counterexample, so they are never absorbed silently.
"""


class QGeomError(Exception):
    """Base class for all qgeom errors."""


# -- finite fields -----------------------------------------------------------

class NotPrime(QGeomError):
    """The claimed characteristic is not a prime number."""


class ReducibleModulus(QGeomError):
    """The modulus polynomial factors over GF(p)."""


class FieldTooLarge(QGeomError):
    """Field order exceeds the configured cap."""


class FieldMismatch(QGeomError):
    """Operands belong to different fields."""


class DivisionByZero(QGeomError, ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class NoConjugation(QGeomError):
    """Conjugation needs an even extension degree."""


# -- linear algebra ----------------------------------------------------------

class AmbientMismatch(QGeomError):
    """Subspaces live in different ambient spaces."""


class DimensionMismatch(QGeomError):
    """An operand has the wrong dimension for this operation."""


# -- graphs and enumeration --------------------------------------------------

class TooLarge(QGeomError):
    """Projected enumeration size exceeds the cap."""


class BadIndex(QGeomError, IndexError):
    """Vertex index out of range."""


class Disconnected(QGeomError):
    """The graph is not connected."""


class NotDistanceRegular(QGeomError):
    """Neighbor counts are not constant over pairs at equal distance.

    Carries the first violating pair in ``args[1]`` as
    ``(distance, pair_a, pair_b)`` where the two pairs disagree.
    """


# -- forms and polar spaces --------------------------------------------------

class OutsideSupport(QGeomError):
    """A vector has a nonzero coordinate beyond the form's support."""


class KindMismatch(QGeomError):
    """Operation not defined for this kind of form."""


class DegenerateForm(QGeomError):
    """The form has a nonzero radical."""


class RankZero(QGeomError):
    """The form admits no singular points."""


class NonUniformMaximals(QGeomError):
    """A maximal totally singular subspace of non-maximal dimension exists."""


class NotSingular(QGeomError):
    """The subspace is not totally singular."""


# -- embeddings --------------------------------------------------------------

class NotInjective(QGeomError):
    """Two distinct sources share an image."""


class DistanceViolation(QGeomError):
    """A vertex pair's distance is not preserved.

    ``args[1]`` holds ``(index_a, index_b, expected, got)``.
    """


class RankTooSmall(QGeomError):
    """Target dimension k is below the polar rank m."""


class NoValidU(QGeomError):
    """Exhaustive search found no star subspace avoiding all pair sums."""


class StarViolation(QGeomError):
    """Some image does not contain the claimed common subspace."""


class ContainmentViolation(QGeomError):
    """An image fails a required containment; details in ``args[1]``."""


class SearchBudgetExceeded(QGeomError):
    """The configured search budget ran out before a verdict."""


class Anomaly(QGeomError):
    """A structurally legal but unexpected configuration, surfaced for
    inspection rather than suppressed.  ``args[1]`` carries details."""


# -- outcomes the mathematics rules out --------------------------------------

class TheoryViolation(QGeomError):
    """An outcome that is provably impossible for correct inputs.

    Raising one of these is the highest-severity signal this library
    produces: it means an implementation bug, or a counterexample that
    deserves a human look.
    """


class LemmaViolation(TheoryViolation):
    """The common intersection of the images is smaller than k - m."""


class EmptyIntersection(TheoryViolation):
    """Images of the maximals through a point meet only in zero."""


class PartialLine(TheoryViolation):
    """A line's image is a proper subset of a projective line."""


class NotEquivalent(TheoryViolation):
    """No graph automorphism connects the two embeddings."""
