from __future__ import annotations

import pytest

from assignpmas.config import HARD_PLAYER_CAP, get_settings, load_settings


def test_defaults() -> None:
    settings = load_settings({})
    assert settings.max_players == 16
    assert settings.lp_oracle_max_players == 10
    assert settings.core_vertex_max_players == 8
    assert settings.default_seed == 7
    assert settings.log_level == "WARNING"


def test_player_cap_override_is_clamped() -> None:
    assert load_settings({"PMAS_MAX_PLAYERS": "12"}).max_players == 12
    assert load_settings({"PMAS_MAX_PLAYERS": "25"}).max_players == HARD_PLAYER_CAP


def test_invalid_player_cap() -> None:
    with pytest.raises(ValueError):
        load_settings({"PMAS_MAX_PLAYERS": "lots"})
    with pytest.raises(ValueError):
        load_settings({"PMAS_MAX_PLAYERS": "0"})


def test_log_level_is_uppercased() -> None:
    assert load_settings({"PMAS_LOG_LEVEL": "debug"}).log_level == "DEBUG"


def test_get_settings_reads_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("PMAS_MAX_PLAYERS", "6")
    get_settings.cache_clear()
    try:
        assert get_settings().max_players == 6
    finally:
        monkeypatch.delenv("PMAS_MAX_PLAYERS")
        get_settings.cache_clear()
