from .chebyshev import (ChebPoly1, eval1, mul1, derivative1, markov_bound, markov_exact,
                        norm_1cheb, norm_conversion_factor, sup_norm_sampled,
                        to_monomial, from_monomial)
from .multivariate import ChebPolyN, evalN, mulN, multivariate_norm_conversion_factor

__all__ = ['ChebPoly1', 'ChebPolyN', 'eval1', 'evalN', 'mul1', 'mulN', 'derivative1',
           'markov_bound', 'markov_exact', 'norm_1cheb', 'norm_conversion_factor',
           'multivariate_norm_conversion_factor', 'sup_norm_sampled',
           'to_monomial', 'from_monomial']
