"""Blow ups, Weil restrictions and blow up split section families over QQ."""

import logging

from .algebra import GREVLEX, LEX, Poly, Ring, TermOrder, groebner, normal_form
from .ideals import CartierStatus, Ideal, QuotientRing, eliminate, intersect, member, quotient, saturate
from .scheme import AffineChart, ClosedSub, SchemeMap

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"
