from .backends import PulseShaperBackend, ComputeResources, gather_in_order
from .dask import BaseDaskBackend, DaskLocalCluster
