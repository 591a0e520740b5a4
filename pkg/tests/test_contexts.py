import numpy as np
import pytest

from hegram.buckets import Histogram
from hegram.contexts import (
    ContextConfig,
    PlainContext,
    SimulatedContext,
    derive_keypair,
    make_context,
    native_available,
)
from hegram.core import build_histogram, in_bucket_table, label_samples
from hegram.exceptions import (
    CapabilityError,
    ConfigurationError,
    DomainError,
    IntegrityError,
    NoiseBudgetError,
)

IDENTITY_TABLE = tuple(range(256))


def fresh(seed=42, **kw):
    ctx = SimulatedContext(ContextConfig(kind="simulated", rng_seed=seed, **kw))
    ctx.keygen()
    return ctx


# -- key generation ------------------------------------------------------------


def test_keygen_deterministic_by_seed():
    assert derive_keypair(42) == derive_keypair(42)
    assert derive_keypair(42).key_id != derive_keypair(43).key_id


def test_context_keygen_matches_config_seed():
    a = fresh(seed=7)
    b = fresh(seed=7)
    c = fresh(seed=8)
    assert a.key_id == b.key_id
    assert a.key_id != c.key_id


def test_native_kind_without_backend_is_a_capability_error():
    if native_available():
        pytest.skip("native backend present in this build")
    with pytest.raises(CapabilityError):
        make_context("native")


def test_make_context_rejects_unknown_kind():
    with pytest.raises(ConfigurationError):
        ContextConfig(kind="quantum")
    with pytest.raises(ConfigurationError):
        make_context(42)


def test_make_context_accepts_kind_string_and_overrides():
    ctx = make_context("simulated", rng_seed=5, noise_budget=3)
    assert ctx.kind == "simulated"
    assert ctx.config.noise_budget == 3
    assert ctx.config.rng_seed == 5


# -- encrypt / decrypt -----------------------------------------------------------


@pytest.mark.parametrize("x", [0, 100, 255])
def test_round_trip_examples(x):
    ctx = fresh()
    assert ctx.decrypt(ctx.encrypt(x)) == x


def test_round_trip_exhaustive_over_domain():
    ctx = fresh()
    for x in range(256):
        assert ctx.decrypt(ctx.encrypt(x)) == x


@pytest.mark.parametrize("x", [256, -1, 1000])
def test_out_of_domain_plaintext(x):
    ctx = fresh()
    with pytest.raises(DomainError):
        ctx.encrypt(x)


def test_wrong_key_is_an_integrity_error():
    a = fresh(seed=1)
    b = fresh(seed=2)
    ct = a.encrypt(5)
    with pytest.raises(IntegrityError):
        b.decrypt(ct)
    with pytest.raises(IntegrityError):
        b.add(ct, b.encrypt(1))


def test_plaintext_not_exposed_by_ciphertext_surface():
    ctx = fresh()
    ct = ctx.encrypt(123)
    assert "123" not in repr(ct)
    assert not hasattr(ct, "plain")
    assert not hasattr(ct, "value")


def test_eval_only_context_cannot_recover_plaintexts(tmp_path):
    client = fresh(seed=3)
    context_id = client.save_keys(root=tmp_path)
    server = SimulatedContext.from_keystore(
        context_id, root=tmp_path, config=client.config, eval_only=True
    )
    ct = client.encrypt(9)
    # The server can compute...
    doubled = server.add(ct, ct)
    refreshed = server.bootstrap(doubled)
    looked_up = server.lut_eval(refreshed, IDENTITY_TABLE)
    # ...but can neither decrypt nor mint fresh encryptions.
    with pytest.raises(IntegrityError):
        server.decrypt(looked_up)
    with pytest.raises(IntegrityError):
        server.encrypt(1)
    assert client.decrypt(looked_up) == 18


# -- addition ----------------------------------------------------------------------


def test_add_homomorphism_example():
    ctx = fresh()
    assert ctx.decrypt(ctx.add(ctx.encrypt(2), ctx.encrypt(3))) == 5


def test_add_identity():
    ctx = fresh()
    for x in (0, 17, 255):
        assert ctx.decrypt(ctx.add(ctx.encrypt(x), ctx.encrypt(0))) == x


def test_add_homomorphism_randomized():
    ctx = fresh()
    rng = np.random.default_rng(1)
    for _ in range(300):
        a = int(rng.integers(0, 128))
        b = int(rng.integers(0, 128))
        assert ctx.decrypt(ctx.add(ctx.encrypt(a), ctx.encrypt(b))) == a + b


def test_iterated_sums_decrypt_to_plain_sum():
    # Sums of m fresh ciphertexts, for every partition size that fits
    # the budget without refreshes and several that need them.
    for m in (2, 3, 5, 8, 20, 50):
        ctx = fresh()
        parts = [255 // m] * m
        parts[0] += 255 - sum(parts)
        acc = ctx.encrypt(parts[0])
        for p in parts[1:]:
            if ctx.noise_budget_of(acc) == 0:
                acc = ctx.bootstrap(acc)
            acc = ctx.add(acc, ctx.encrypt(p))
        assert ctx.decrypt(acc) == 255


def test_add_overflow_is_a_domain_error():
    ctx = fresh()
    with pytest.raises(DomainError):
        ctx.add(ctx.encrypt(200), ctx.encrypt(100))


# -- noise budget ---------------------------------------------------------------------


def test_add_chain_exhausts_budget_without_bootstrap():
    budget = 4
    ctx = fresh(noise_budget=budget)
    acc = ctx.encrypt(0)
    for _ in range(budget):
        acc = ctx.add(acc, ctx.encrypt(1))
    assert ctx.noise_budget_of(acc) == 0
    with pytest.raises(NoiseBudgetError):
        ctx.add(acc, ctx.encrypt(1))


def test_bootstrap_resets_budget_and_preserves_plaintext():
    ctx = fresh(noise_budget=4)
    ct = ctx.encrypt(7)
    refreshed = ctx.bootstrap(ct)
    assert ctx.decrypt(refreshed) == 7
    assert ctx.noise_budget_of(refreshed) == ctx.config.noise_budget


def test_n_adds_bootstrap_n_adds_succeeds_where_2n_fails():
    n = 4
    ctx = fresh(noise_budget=n)

    def chain(length, with_bootstrap):
        acc = ctx.encrypt(0)
        for i in range(length):
            if with_bootstrap and i == n:
                acc = ctx.bootstrap(acc)
            acc = ctx.add(acc, ctx.encrypt(1))
        return acc

    with pytest.raises(NoiseBudgetError):
        chain(2 * n, with_bootstrap=False)
    assert ctx.decrypt(chain(2 * n, with_bootstrap=True)) == 2 * n


def test_lut_eval_accepts_exhausted_ciphertexts():
    # A lookup rides on a bootstrap, so it must be legal at budget 0.
    ctx = fresh(noise_budget=1)
    ct = ctx.add(ctx.encrypt(3), ctx.encrypt(4))
    assert ctx.noise_budget_of(ct) == 0
    out = ctx.lut_eval(ct, IDENTITY_TABLE)
    assert ctx.decrypt(out) == 7
    assert ctx.noise_budget_of(out) == 1


# -- table lookups -----------------------------------------------------------------------


def test_lut_identity_table():
    ctx = fresh()
    assert ctx.decrypt(ctx.lut_eval(ctx.encrypt(41), IDENTITY_TABLE)) == 41


def test_lut_bucket_membership_table():
    ctx = fresh()
    table = in_bucket_table(40, 50)
    assert ctx.decrypt(ctx.lut_eval(ctx.encrypt(41), table)) == 1
    assert ctx.decrypt(ctx.lut_eval(ctx.encrypt(50), table)) == 0


def test_lut_correctness_exhaustive_per_table():
    ctx = fresh()
    for table in (IDENTITY_TABLE, in_bucket_table(40, 50), in_bucket_table(0, 100)):
        for x in range(256):
            assert ctx.decrypt(ctx.lut_eval(ctx.encrypt(x), table)) == table[x]


def test_lut_rejects_partial_tables():
    ctx = fresh()
    with pytest.raises(ConfigurationError):
        ctx.lut_eval(ctx.encrypt(1), (0, 1))


def test_forced_failure_always_returns_a_wrong_entry():
    ctx = fresh(inject_failures=True, failure_probability=1.0)
    for x in range(0, 256, 17):
        got = ctx.decrypt(ctx.lut_eval(ctx.encrypt(x), IDENTITY_TABLE))
        assert got != x


def test_failure_injection_off_by_default():
    cfg = ContextConfig(kind="simulated")
    assert cfg.inject_failures is False
    assert cfg.failure_probability == pytest.approx(1.0 / 100_000)


def test_failure_frequency_tracks_probability():
    ctx = fresh(seed=9, inject_failures=True, failure_probability=0.01)
    wrong = 0
    trials = 10_000
    for i in range(trials):
        x = i % 256
        if ctx.decrypt(ctx.lut_eval(ctx.encrypt(x), IDENTITY_TABLE)) != x:
            wrong += 1
    assert 0.006 <= wrong / trials <= 0.014


# -- counters -------------------------------------------------------------------------------


def test_fresh_context_counter_is_zero():
    ctx = fresh()
    assert ctx.snapshot_counts().total() == 0


def test_single_add_charges_one_encrypted_add():
    ctx = fresh()
    ctx.add(ctx.encrypt(1), ctx.encrypt(2))
    counts = ctx.snapshot_counts()
    assert counts.encrypted_add == 1
    assert counts.total() == 1


def test_charging_model_per_primitive():
    ctx = fresh()
    ctx.lut_eval(ctx.encrypt(1), IDENTITY_TABLE)
    counts = ctx.snapshot_counts()
    assert (counts.pbs, counts.key_switch) == (1, 1)
    ctx.bootstrap(ctx.encrypt(1))
    assert ctx.snapshot_counts().pbs == 2
    assert ctx.snapshot_counts().key_switch == 1


def test_reset_counts():
    ctx = fresh()
    ctx.add(ctx.encrypt(1), ctx.encrypt(2))
    ctx.reset_counts()
    assert ctx.snapshot_counts().total() == 0


def test_label_samples_cost_matches_hand_derived_closed_form(layout10):
    # Per sample over B=10 buckets with the default budget of 8:
    #   3 lookups per bucket               -> 30 pbs + 30 key switches
    #   1 combine addition per bucket      -> 10 encrypted adds
    #   9 fold additions + 1 refresh       ->  9 encrypted adds + 1 pbs
    # Totals per sample: pbs 31, key_switch 30, encrypted_add 19.
    ctx = fresh()
    hist = Histogram(layout10, [ctx.ingest(c) for c in [2, 0, 1, 3, 0, 2, 4, 0, 1, 2]])
    ctx.reset_counts()
    data = list(np.random.default_rng(2).integers(0, 100, size=24))
    label_samples([int(v) for v in data], hist, 2, ctx)
    counts = ctx.snapshot_counts()
    assert counts.pbs == 31 * 24
    assert counts.key_switch == 30 * 24
    assert counts.encrypted_add == 19 * 24
    assert counts.clear_add == counts.clear_mul == counts.encrypted_neg == 0


def test_counter_linearity_in_sample_count(layout10):
    rng = np.random.default_rng(8)
    data = [int(v) for v in rng.integers(0, 100, size=24)]

    def cost(samples):
        ctx = fresh()
        build_histogram(samples, layout10, ctx)
        hist = build_histogram([], layout10, ctx)  # zero-cost empty build
        ctx.reset_counts()
        build_histogram(samples, layout10, ctx)
        counts_build = ctx.snapshot_counts()
        ctx.reset_counts()
        label_samples(samples, hist, 2, ctx)
        return counts_build, ctx.snapshot_counts()

    build1, label1 = cost(data)
    build2, label2 = cost(data + data)
    for single, double in ((build1, build2), (label1, label2)):
        for name, value in double.as_dict().items():
            assert value == 2 * single.as_dict()[name], name


def test_plain_context_charges_nothing(layout10):
    ctx = PlainContext()
    build_histogram([1, 2, 3], layout10, ctx)
    assert ctx.snapshot_counts().total() == 0


def test_add_commutes_under_encryption():
    ctx = fresh()
    a, b = ctx.encrypt(19), ctx.encrypt(23)
    assert ctx.decrypt(ctx.add(a, b)) == ctx.decrypt(ctx.add(b, a)) == 42


def test_per_worker_counters_merge_to_single_context_cost(layout10):
    # Labeling is per-sample parallel: splitting the samples across two
    # worker contexts and merging their counters must equal one context
    # doing all the work, and the labels must agree.
    rng = np.random.default_rng(6)
    data = [int(v) for v in rng.integers(0, 100, size=24)]
    counts = [2, 0, 1, 3, 0, 2, 4, 0, 1, 2]

    def label_with(ctx, samples):
        hist = Histogram(layout10, [ctx.ingest(c) for c in counts])
        ctx.reset_counts()
        labels = label_samples(samples, hist, 2, ctx)
        return [ctx.decrypt(v) for v in labels], ctx.snapshot_counts()

    whole_ctx = fresh(seed=1)
    whole_labels, whole_counts = label_with(whole_ctx, data)

    worker_a, worker_b = fresh(seed=2), fresh(seed=3)
    labels_a, counts_a = label_with(worker_a, data[:12])
    labels_b, counts_b = label_with(worker_b, data[12:])
    assert labels_a + labels_b == whole_labels
    assert (counts_a + counts_b).as_dict() == whole_counts.as_dict()


# -- serialization -----------------------------------------------------------------------------


def test_ciphertext_serialization_round_trip():
    ctx = fresh()
    ct = ctx.encrypt(77)
    blob = ctx.serialize_ciphertext(ct)
    back = ctx.deserialize_ciphertext(blob)
    assert ctx.decrypt(back) == 77
    assert ctx.noise_budget_of(back) == ctx.noise_budget_of(ct)


def test_ciphertext_blob_does_not_leak_plaintext_byte():
    ctx = fresh()
    blob = ctx.serialize_ciphertext(ctx.encrypt(77))
    assert 77 not in blob[-2:-1]  # payload byte is masked


def test_ciphertext_deserialize_rejects_foreign_and_corrupt_blobs():
    a = fresh(seed=1)
    b = fresh(seed=2)
    blob = a.serialize_ciphertext(a.encrypt(5))
    with pytest.raises(IntegrityError):
        b.deserialize_ciphertext(blob)
    from hegram.exceptions import KeyStoreError

    with pytest.raises(KeyStoreError):
        a.deserialize_ciphertext(b"XXXX" + blob[4:])
    with pytest.raises(KeyStoreError):
        a.deserialize_ciphertext(blob[:-1])
