#!/usr/bin/env python3
"""Test config loading: defaults, overrides, type coercion and bad values."""

from kmer_test_utils import SLOW  # noqa: F401  (sets up sys.path)

from kmermis.config import DEFAULT_CONFIG, GIB, load_config


def test_defaults_without_a_file(tmp_path):
    config = load_config(tmp_path / "missing.config")
    assert config == DEFAULT_CONFIG
    assert config['memory_budget'] == 8 * GIB
    assert config['k_ceiling'] == 15
    assert config['alphabet'] == 'ACGT'


def test_overrides_are_coerced(tmp_path):
    path = tmp_path / "kmermis.config"
    path.write_text(
        "# kmermis settings\n"
        "memory_budget = 1073741824  # 1 GiB\n"
        "alphabet=ACGU\n"
        "\n"
        "table_max_workers = 2\n"
        "log_file =\n"
        "custom_key = kept\n"
    )
    config = load_config(path)
    assert config['memory_budget'] == GIB
    assert isinstance(config['table_max_workers'], int) and config['table_max_workers'] == 2
    assert config['alphabet'] == 'ACGU'
    assert config['log_file'] == ''
    assert config['custom_key'] == 'kept'
    assert config['k_ceiling'] == DEFAULT_CONFIG['k_ceiling']


def test_bad_values_keep_the_default(tmp_path):
    path = tmp_path / "kmermis.config"
    path.write_text("k_ceiling = fifteen\nprogress_interval = 5\nnot a setting\n")
    config = load_config(path)
    assert config['k_ceiling'] == 15
    assert config['progress_interval'] == 5


if __name__ == "__main__":
    config = load_config()
    print("Config loaded successfully!")
    print(f"memory_budget: {config['memory_budget']} (type: {type(config['memory_budget'])})")
    print(f"alphabet: {config['alphabet']}")
    print(f"k_ceiling: {config['k_ceiling']}")
