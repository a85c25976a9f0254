from typing import Dict, Type

from .aggregators import (
    Aggregator,
    AggregatorReplicaMean,
    AggregatorReplicaStd,
    AggregatorReplicaExtremes,
)

aggregator_name_to_AggregatorClass: Dict[str, Type[Aggregator]] = {
    "mean": AggregatorReplicaMean,
    "std": AggregatorReplicaStd,
    "extremes": AggregatorReplicaExtremes,
}
