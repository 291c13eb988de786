from .gauss_weierstrass import (GaussOperator, TruncationParams, gauss_moment, apply_gauss,
                                sup_error_bound, cheb_error_bound, tail_bound, chernoff_tail,
                                apply_truncated_gauss_numeric)
from .sos_exp import (ExpApprox, KernelSpec, Schedule, schedule, theoretical_degree,
                      build_exp_approx, build_kernel, custom_kernel, kernel_eval)
from .quadrature import QuadratureRule, gauss_legendre, tensor_rule
from .operator import (apply_kernel, sos_decompose_image, apply_product_kernel,
                       multivariate_error_bound)

__all__ = ['GaussOperator', 'TruncationParams', 'gauss_moment', 'apply_gauss', 'sup_error_bound',
           'cheb_error_bound', 'tail_bound', 'chernoff_tail', 'apply_truncated_gauss_numeric',
           'ExpApprox', 'KernelSpec', 'Schedule', 'schedule', 'theoretical_degree',
           'build_exp_approx', 'build_kernel', 'custom_kernel', 'kernel_eval',
           'QuadratureRule', 'gauss_legendre', 'tensor_rule',
           'apply_kernel', 'sos_decompose_image', 'apply_product_kernel', 'multivariate_error_bound']
