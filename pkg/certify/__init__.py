from .sos import WeightedSquaresSOS, QuadraticModuleElement
from .certificates import (pell_certificate, one_pm_Talpha, norm_shift_certificate, assemble_putinar,
                           verify, one_norm_gap, check_extension_radius, CertifiedLowerBound,
                           VerificationReport)

__all__ = ['WeightedSquaresSOS', 'QuadraticModuleElement', 'pell_certificate', 'one_pm_Talpha',
           'norm_shift_certificate', 'assemble_putinar', 'verify', 'one_norm_gap',
           'check_extension_radius', 'CertifiedLowerBound', 'VerificationReport']
