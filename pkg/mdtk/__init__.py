from mdtk.__version__ import __version__
from mdtk.exceptions import *
from mdtk.cyclo import Cyc, RootOfUnity, root_of_unity
from mdtk.modular import ModularDatum, FusionTensor, VerificationReport, verify
from mdtk.construct import (MetricGroup, CocycleSpec, cyclic_metric_group, pointed,
                            ising, fibonacci, so5_level9, deligne_product,
                            double_abelian, trivial)
from mdtk.galois import galois_permutation, conjugate_category, bar_category
from mdtk.bounds import BoundVerdict, ExtremalClass, bound_check
from mdtk.catalog import Catalog, CatalogEntry
from mdtk.helpers import save, load
