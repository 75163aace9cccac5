"""
Readers and writers for scenario (.scn) and spin-network model (.model) files.
"""
from .model_file import ModelFile, default_horizon, load_model, parse_model
from .scenario_file import (
    ScenarioFile, format_behavior_file, format_behavior_section, format_scenario_section,
    load_scenario, parse_scenario,
)

__all__ = [
    'ScenarioFile', 'parse_scenario', 'load_scenario',
    'format_scenario_section', 'format_behavior_section', 'format_behavior_file',
    'ModelFile', 'parse_model', 'load_model', 'default_horizon',
]
