import pytest

from steinberg_kernel.config import KernelConfig, resolve
from steinberg_kernel.errors import ConfigError


def test_defaults():
    config = KernelConfig()
    assert config.budget.max_cosets == 100_000
    assert config.budget.max_group_elements == 1_000_000
    assert config.sampling.seed == 20240601
    assert config.logging.renderer == "console"
    assert config.report.schema_version == 1


def test_from_dict_overrides_sections():
    config = KernelConfig.from_dict(
        {"budget": {"max_cosets": 500}, "logging": {"level": "DEBUG", "renderer": "json"}}
    )
    assert config.budget.max_cosets == 500
    assert config.budget.max_group_elements == 1_000_000
    assert config.logging.renderer == "json"


def test_unknown_key_rejected():
    with pytest.raises(ConfigError):
        KernelConfig.from_dict({"budget": {"max_widgets": 3}})


@pytest.mark.parametrize("value", [0, -5])
def test_non_positive_budget_rejected(value):
    with pytest.raises(ConfigError):
        KernelConfig.from_dict({"budget": {"max_cosets": value}})


def test_bad_renderer_rejected():
    with pytest.raises(ConfigError):
        KernelConfig.from_dict({"logging": {"renderer": "xml"}})


def test_from_yaml(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("budget:\n  max_cosets: 1234\nsampling:\n  samples: 77\n", encoding="utf-8")
    config = KernelConfig.from_yaml(str(path))
    assert config.budget.max_cosets == 1234
    assert config.sampling.samples == 77


def test_load_prefers_explicit_path_and_env_overrides(tmp_path, monkeypatch):
    path = tmp_path / "config.yaml"
    path.write_text("budget:\n  max_cosets: 1234\n", encoding="utf-8")
    monkeypatch.setenv("STEINBERG_KERNEL_SEED", "7")
    config = KernelConfig.load(str(path))
    assert config.budget.max_cosets == 1234
    assert config.sampling.seed == 7


def test_load_falls_back_to_env(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("STEINBERG_KERNEL_CONFIG", raising=False)
    monkeypatch.setenv("STEINBERG_KERNEL_MAX_COSETS", "999")
    monkeypatch.setenv("STEINBERG_KERNEL_LOG_RENDERER", "json")
    config = KernelConfig.load()
    assert config.budget.max_cosets == 999
    assert config.logging.renderer == "json"


def test_to_dict_round_trips_through_from_dict():
    config = KernelConfig()
    config.budget.max_cosets = 321
    assert KernelConfig.from_dict(config.to_dict()).budget.max_cosets == 321


def test_resolve():
    config = KernelConfig()
    assert resolve(config) is config
    assert isinstance(resolve(None), KernelConfig)
