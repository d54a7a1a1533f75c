"""
Contains structure mapping: transfer of a learned dynamics model and policy
to a world that shares its dynamics but not its colors
"""
from .mapping import AttributeMapping, CategoryGroups, Evidence
from .mapping import MismatchEvent
from .structure_mapping import TransferConfig, TransferResult, MappedDynamics
from .structure_mapping import predict_with_mapping, find_source_match
from .structure_mapping import structure_map, transfer_policy_eval
