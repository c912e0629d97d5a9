import pytest

from mahlerbound.errors import InvalidParametersError
from mahlerbound.logging import level_for
from mahlerbound.settings import DEFAULT_SETTINGS, Settings


def test_defaults():
    assert DEFAULT_SETTINGS.precision_bits == 128
    assert DEFAULT_SETTINGS.max_precision_bits == 1024
    assert DEFAULT_SETTINGS.worker_count == 1
    assert Settings.from_environ({}) == DEFAULT_SETTINGS


def test_environment_overrides():
    settings = Settings.from_environ(
        {
            "MAHLERBOUND_PRECISION": "256",
            "MAHLERBOUND_MAX_PRECISION": "4096",
            "MAHLERBOUND_WORKERS": "3",
            "UNRELATED": "x",
        }
    )

    assert settings.precision_bits == 256
    assert settings.max_precision_bits == 4096
    assert settings.worker_count == 3
    assert settings.graeffe_max_bits == DEFAULT_SETTINGS.graeffe_max_bits


@pytest.mark.parametrize(
    "environ",
    [
        {"MAHLERBOUND_PRECISION": "lots"},
        {"MAHLERBOUND_PRECISION": "8"},
        {"MAHLERBOUND_WORKERS": "0"},
    ],
)
def test_invalid_environment(environ):
    with pytest.raises(InvalidParametersError) as info:
        Settings.from_environ(environ)

    assert info.value.record == "environment settings"


def test_level_for():
    assert level_for() == 20
    assert level_for(verbose=True) == 10
    assert level_for(quiet=True) == 30
    assert level_for(verbose=True, quiet=True) == 10
