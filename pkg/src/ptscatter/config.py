"""
This file loads the numerical settings of the package from YAML.

The packaged defaults live in config/defaults.yaml. A user file only has to
contain the keys it overrides; everything else falls back to the defaults.
"""

import copy
import os

import yaml

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), "config", "defaults.yaml")


def _merge(base, override):
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path=None):
    """
    Read the packaged defaults and, if given, overlay a user YAML file.
    Args:
        config_path: Optional path to a YAML file with the same sections as defaults.yaml.
    Returns:
        config: Nested dictionary of settings.
    """
    with open(DEFAULT_CONFIG_PATH, "r") as file:
        config = yaml.safe_load(file)

    if config_path is None:
        return config

    if not os.path.exists(config_path):
        raise FileNotFoundError(f"The specified config_path {config_path} does not exist")

    with open(config_path, "r") as file:
        user_config = yaml.safe_load(file) or {}
    if not isinstance(user_config, dict):
        raise ValueError(f"Config file {config_path} must hold a mapping of sections")

    return _merge(config, user_config)


DEFAULTS = load_config()


def clear_caches():
    """
    Drop results memoized under the previous settings.
    """
    # imported here: states reads DEFAULTS at import time
    from ptscatter.states import state

    state.cache_clear()


def use_config(config_path):
    """
    Overlay a user YAML file onto DEFAULTS in place, so every module sees the new values.
    """
    config = load_config(config_path)
    for section, values in config.items():
        if isinstance(values, dict) and isinstance(DEFAULTS.get(section), dict):
            DEFAULTS[section].update(values)
        else:
            DEFAULTS[section] = values
    clear_caches()
    return DEFAULTS
