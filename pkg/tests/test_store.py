import random
import threading
import time

from extrucat.rdf import IRI, Literal, Triple, TripleStore


def _t(i: int, j: int, k: int) -> Triple:
    return Triple(IRI(f"http://x/s{i}"), IRI(f"http://x/p{j}"), IRI(f"http://x/o{k}"))


def test_insert_is_idempotent_on_duplicates():
    store = TripleStore()
    store.insert([_t(1, 1, 1)])
    store.insert([_t(1, 1, 1)])
    assert len(store) == 1


def test_empty_batch_keeps_revision():
    store = TripleStore()
    r1 = store.insert([_t(1, 1, 1)])
    r2 = store.insert([])
    r3 = store.insert([_t(1, 1, 1)])  # no effective change either
    assert r1 == r2 == r3 == store.revision


def test_thousand_triples_enumerate_exactly():
    store = TripleStore()
    triples = [_t(i, i % 7, i % 13) for i in range(1000)]
    store.insert(triples)
    # Independent set container as the counting oracle.
    assert set(store.snapshot()) == set(triples)
    assert len(list(store.match())) == len(set(triples))


def test_remove_and_readd_in_one_batch_is_noop():
    store = TripleStore()
    store.insert([_t(1, 1, 1)])
    before = store.revision
    after = store.apply(add=[_t(1, 1, 1)], remove=[_t(1, 1, 1)])
    assert after == before
    assert len(store) == 1


def test_match_against_linear_scan_oracle():
    rng = random.Random(11)
    store = TripleStore()
    triples = list(
        {
            _t(rng.randint(0, 12), rng.randint(0, 5), rng.randint(0, 12))
            for _ in range(500)
        }
    )
    store.insert(triples)
    snap = store.snapshot()
    universe = list({term for t in triples for term in t})
    for _ in range(100):
        s = rng.choice(universe + [None, None])
        p = rng.choice([IRI(f"http://x/p{i}") for i in range(6)] + [None])
        o = rng.choice(universe + [None, None])
        if isinstance(s, Literal):
            s = None
        if p is not None and not isinstance(p, IRI):
            p = None
        got = set(snap.match(s, p, o))
        want = {
            t
            for t in triples
            if (s is None or t.subject == s)
            and (p is None or t.predicate == p)
            and (o is None or t.object == o)
        }
        assert got == want


def test_snapshot_isolation_under_concurrent_writer():
    store = TripleStore()
    store.insert([_t(i, 0, 0) for i in range(50)])
    snap = store.snapshot()
    seen_sizes = []
    stop = threading.Event()

    def writer():
        for i in range(200):
            store.insert([_t(1000 + i, 1, 1)])
        stop.set()

    thread = threading.Thread(target=writer)
    thread.start()
    while not stop.is_set():
        seen_sizes.append(len(list(snap.match())))
        time.sleep(0.001)
    thread.join()
    seen_sizes.append(len(list(snap.match())))
    assert set(seen_sizes) == {50}
    assert len(store) == 250


def test_match_typing_triples_on_demo_data(demo):
    from extrucat.rdf import INST, OWL, RDF

    snap = demo.store.snapshot()
    typed = list(snap.match(predicate=RDF.type))
    assert all(t.predicate == RDF.type for t in typed)
    # Every class assertion in the store comes back, nothing else.
    assert len(typed) == sum(1 for t in snap if t.predicate == RDF.type)

    # A machine's type list includes its production restriction node.
    e01_types = [t.object for t in snap.match(subject=INST["E01"], predicate=RDF.type)]
    restrictions = [
        o for o in e01_types if OWL.Restriction in snap.objects(o, RDF.type)
    ]
    assert len(restrictions) == 1


def test_revision_visible_per_snapshot():
    store = TripleStore()
    r1 = store.insert([_t(1, 1, 1)])
    snap1 = store.snapshot()
    r2 = store.insert([_t(2, 2, 2)])
    assert (r1, r2) == (1, 2)
    assert snap1.revision == 1 and len(snap1) == 1
    assert store.snapshot().revision == 2


def test_wal_replay_restores_store(tmp_path):
    wal = tmp_path / "wal.ttl"
    store = TripleStore(wal_path=wal)
    store.insert([_t(1, 1, 1), _t(2, 2, 2)])
    store.remove([_t(1, 1, 1)])
    store.insert([Triple(IRI("http://x/s"), IRI("http://x/p"), Literal("v\n\"q"))])

    replayed = TripleStore()
    replayed.replay_wal(wal)
    assert set(replayed.snapshot()) == set(store.snapshot())


def test_wal_replay_preserves_blank_ids(tmp_path):
    wal = tmp_path / "wal.ttl"
    store = TripleStore(wal_path=wal)
    blank = store.new_blank()
    store.insert([Triple(blank, IRI("http://x/p"), Literal.integer(1))])
    store.remove([Triple(blank, IRI("http://x/p"), Literal.integer(1))])

    replayed = TripleStore()
    replayed.replay_wal(wal)
    assert len(replayed) == 0


def test_index_coherence_after_mutation_sequence():
    rng = random.Random(3)
    store = TripleStore()
    alive: set[Triple] = set()
    for _ in range(60):
        batch_add = {_t(rng.randint(0, 8), rng.randint(0, 3), rng.randint(0, 8)) for _ in range(rng.randint(0, 6))}
        batch_remove = set(rng.sample(sorted(alive, key=repr), k=min(len(alive), rng.randint(0, 4))))
        store.apply(add=batch_add, remove=batch_remove)
        alive = (alive - batch_remove) | batch_add
        snap = store.snapshot()
        assert set(snap) == alive
        # Each index path answers identically.
        for t in alive:
            assert t in snap
            assert set(snap.match(subject=t.subject, predicate=t.predicate)) >= {t} - set()
            assert t in set(snap.match(predicate=t.predicate, object=t.object))
            assert t in set(snap.match(subject=t.subject, object=t.object))
