from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

from matroidwalks.matroid import build_explicit, build_graphic, build_partition, build_uniform, \
    load_descriptor, verify_axioms
from matroidwalks.complex import WeightedComplex, build_complex, contract, level_distribution
from matroidwalks.walks import TransitionKernel, down_up_walk, up_down_walk, bases_exchange, \
    Sampler
from matroidwalks.constant_search import estimate_lsc, estimate_mlsc
from matroidwalks.mixing import exact_mixing_time
from matroidwalks.negdep import BooleanDistribution, theta_example, slc_check, scp_check, \
    ncd_check
