import numpy as np
import pytest

from zoosim.envapi import parse_config, make_env
from zoosim.world import generate_scene


@pytest.fixture
def flat_scene():
    return generate_scene("Flat", 0, 12, 12)


@pytest.fixture
def obstacle_scene():
    return generate_scene("ObstacleField", 3, 16, 16)


def tracking_config_doc(policy="static", modalities=("mask",),
                        width=96, height=72, nx=24, ny=24, speed=80.0,
                        max_steps=500, interval=1):
    return {
        "env_name": "track_test",
        "scene": f"generator:Flat:0:{nx}x{ny}",
        "task": "Tracking",
        "agents": {
            "player": {"class_name": "Human", "cam_id": 1,
                       "relative_location": [20, 0, 0]},
            "target": {"class_name": "Human", "internal_nav": True,
                       "policy": policy, "speed": speed},
        },
        "observation": {"modalities": list(modalities), "width": width,
                        "height": height, "far_clip": 2500},
        "safe_start": [[nx * 100 / 2, ny * 100 / 2, 0]],
        "reset_area": [150, nx * 100 - 150, 150, ny * 100 - 150, 0, 300],
        "random_init": False,
        "interval": interval,
        "max_steps": max_steps,
    }


def nav_config_doc(nx=16, ny=16, max_steps=2000):
    return {
        "env_name": "nav_test",
        "scene": f"generator:Flat:0:{nx}x{ny}",
        "task": "Navigation",
        "agents": {"player": {"class_name": "Human", "cam_id": 1}},
        "observation": {"modalities": [], "width": 96, "height": 72},
        "safe_start": [[150, 150, 0]],
        "target_location": [(nx - 2) * 100 + 50, (ny - 2) * 100 + 50],
        "random_init": False,
        "max_steps": max_steps,
    }


@pytest.fixture
def tracking_env():
    return make_env(parse_config(tracking_config_doc()))


@pytest.fixture
def nav_env():
    return make_env(parse_config(nav_config_doc()))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
