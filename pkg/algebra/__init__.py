"""
Coefficient rings and truncated series: the arithmetic layer every other
package builds on.
"""
from .errors import PadicError, InputError, ObstructionError, PrecisionExhausted
from .zq import RingSpec, ZqElement, teichmuller
from .series import INFINITE, Series, comp_inverse, compose, iterate, reduce_mod_p, weierstrass_degree
from .bivariate import BiSeries, bi_eval
from .log_series import LogCoefficient, LogSeries
from .newton import NewtonPolygon, Segment, newton_polygon
