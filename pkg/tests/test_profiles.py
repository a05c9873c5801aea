"""Profile parsing, bundled profiles, resolution order."""

import pytest

from kgqual.profiles import (
    BUNDLED_PROFILE_NAMES,
    PROFILE_DIR_ENV,
    ProfileError,
    bundled_profile,
    load_profile_file,
    parse_profile_text,
    resolve_profile,
)


def test_all_bundled_profiles_load():
    for name in BUNDLED_PROFILE_NAMES:
        profile = bundled_profile(name)
        assert profile.name == name
        assert profile.type_predicate
        assert profile.subclass_predicate


def test_bundled_names():
    assert set(BUNDLED_PROFILE_NAMES) == {"wikidata", "freebase", "dbpedia", "yago", "schemaorg"}


def test_wikidata_profile_predicates():
    profile = bundled_profile("wikidata")
    assert profile.type_predicate.endswith("P31")
    assert profile.subclass_predicate.endswith("P279")
    assert profile.class_marker is None


def test_freebase_profile_markers():
    profile = bundled_profile("freebase")
    assert profile.class_marker is not None
    assert profile.class_marker.object.endswith("#Class")
    assert profile.property_marker.object_suffix == "Property"


def test_unknown_bundled_profile():
    with pytest.raises(ProfileError):
        bundled_profile("nope")


def test_parse_minimal_profile():
    profile = parse_profile_text(
        """
        # comment
        type_predicate = urn:t
        subclass_predicate = urn:s
        domain_predicate = urn:d
        """
    )
    assert profile.type_predicate == "urn:t"
    assert profile.label_predicate is None
    assert not profile.type_objects_are_classes


def test_parse_rejects_unknown_keys():
    with pytest.raises(ProfileError, match="unknown keys"):
        parse_profile_text("type_predicate = urn:t\nsubclass_predicate = urn:s\nnope = 1\n")


def test_parse_rejects_duplicate_keys():
    with pytest.raises(ProfileError, match="duplicate"):
        parse_profile_text("type_predicate = a\ntype_predicate = b\n")


def test_parse_requires_core_predicates():
    with pytest.raises(ProfileError):
        parse_profile_text("type_predicate = urn:t\n")


def test_marker_rule_needs_pattern():
    with pytest.raises(ProfileError):
        parse_profile_text(
            "type_predicate = urn:t\nsubclass_predicate = urn:s\n"
            "class_marker_predicate = urn:m\n"
        )


def test_load_profile_file(tmp_path):
    path = tmp_path / "mine.profile"
    path.write_text("type_predicate = urn:t\nsubclass_predicate = urn:s\n")
    profile = load_profile_file(path)
    assert profile.name == "mine"


def test_resolve_requires_exactly_one(tmp_path):
    with pytest.raises(ProfileError):
        resolve_profile(None, None)
    with pytest.raises(ProfileError):
        resolve_profile("wikidata", tmp_path / "x.profile")


def test_resolve_env_dir_precedes_bundled(tmp_path, monkeypatch):
    override = tmp_path / "wikidata.profile"
    override.write_text("type_predicate = urn:custom\nsubclass_predicate = urn:s\n")
    monkeypatch.setenv(PROFILE_DIR_ENV, str(tmp_path))
    profile = resolve_profile("wikidata")
    assert profile.type_predicate == "urn:custom"
    monkeypatch.delenv(PROFILE_DIR_ENV)
    assert resolve_profile("wikidata").type_predicate.endswith("P31")
