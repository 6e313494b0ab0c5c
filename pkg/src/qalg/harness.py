"""Seeded random algebras, modules, and short exact sequences, plus the
campaign runner that executes the whole lemma suite on fresh draws.

Admissibility of generated presentations is forced by adding every path of
a fixed length as a monomial relation, so compilation always succeeds and
the Loewy length never exceeds that layer.  All draws are reproducible from
(seed, params); a failing draw is shrunk by scaling down generator counts
and removing arrows while the failure persists, and the minimized
presentation is written out as a .qalg file.
"""

from __future__ import annotations

import json
import random
import zlib
from dataclasses import dataclass, field, replace
from pathlib import Path as FsPath

import numpy as np

from .errors import NotAdmissible, QalgError, TooManyPaths
from .modules import (
    Module,
    ModuleHom,
    Submodule,
    direct_sum,
    hom_space,
    is_iso,
    projective,
    quotient,
    quotient_with_projection,
    radical,
    regular_module,
    simple,
    strip_projective_summands,
    submodule_generated,
    syzygy,
    top_dims,
)
from .quiver import Arrow, Quiver, Relation, compile_presentation, _enumerate_paths
from .torsion import (
    _sub_radical_rows,
    _sub_torsion_rows,
    classify_simples,
    layer_length,
    loewy_length,
    module_times_ideal,
    pd,
    pd_of_set,
    torsion_layer_ideal,
    torsion_layer_submodule,
    torsion_quotient,
    torsion_radical,
)


@dataclass(frozen=True)
class GenParams:
    seed: int = 42
    n_algebras: int = 50
    draws_per_algebra: int = 20
    min_vertices: int = 1
    max_vertices: int = 8
    max_arrows: int = 12
    max_extra_relations: int = 4
    layer: int = 5
    module_budget: int = 22
    modulus: int = 101
    dim_budget: int = 70


def _mix(*parts) -> int:
    acc = 0
    for part in parts:
        acc = zlib.crc32(str(part).encode("utf-8"), acc)
    return acc


def random_presentation(params: GenParams, seed: int | None = None):
    """A compilable random presentation: (quiver, relations, algebra)."""
    rng = random.Random(params.seed if seed is None else seed)
    path_cap = max(500, 6 * params.dim_budget)
    for _ in range(200):
        n = rng.randint(params.min_vertices, params.max_vertices)
        n_arrows = rng.randint(0, params.max_arrows)
        arrows = [
            Arrow(f"a{k + 1}", rng.randint(1, n), rng.randint(1, n))
            for k in range(n_arrows)
        ]
        quiver = Quiver(n, arrows)
        try:
            by_len = _enumerate_paths(quiver, params.layer, path_cap)
        except TooManyPaths:
            continue
        relations = []
        if len(by_len) > params.layer:
            relations += [Relation(((1, p),)) for p in by_len[params.layer]]
        shorter = [
            p
            for length in range(2, params.layer)
            if len(by_len) > length
            for p in by_len[length]
        ]
        extra = rng.randint(0, params.max_extra_relations)
        if shorter and extra:
            relations += [
                Relation(((1, p),)) for p in rng.sample(shorter, min(extra, len(shorter)))
            ]
        try:
            algebra = compile_presentation(
                quiver, relations, params.modulus, path_cap=path_cap
            )
        except (NotAdmissible, TooManyPaths):
            continue
        if algebra.dim > params.dim_budget:
            continue
        return quiver, relations, algebra
    raise QalgError("random presentation generation kept drawing degenerate cases")


def random_algebra(params: GenParams, seed: int | None = None):
    return random_presentation(params, seed)[2]


def _cached_regular(algebra) -> Module:
    reg = getattr(algebra, "_regular_cache", None)
    if reg is None:
        reg = regular_module(algebra)
        algebra._regular_cache = reg
    return reg


def random_module(algebra, seed: int, budget: int = 22, gen_scale: float = 1.0) -> Module:
    """A random quotient P/U of a sum of projectives within the size budget."""
    rng = random.Random(seed)
    vertices = list(algebra.quiver.vertices)
    summands = []
    total = 0
    while True:
        v = rng.choice(vertices)
        p = projective(algebra, v)
        if summands and total + p.total_dim > budget:
            break
        summands.append(p)
        total += p.total_dim
        if total >= budget or rng.random() < 0.25:
            break
    cover = direct_sum(summands, algebra=algebra)
    rad = radical(cover)
    n_gens = rng.randint(0, 4)
    n_gens = max(1, int(n_gens * gen_scale)) if n_gens else 0
    elements = []
    for _ in range(n_gens):
        supported = [v for v in vertices if rad.rows[v - 1].shape[0]]
        if not supported:
            break
        v = rng.choice(supported)
        coeffs = np.array(
            [rng.randrange(algebra.p) for _ in range(rad.rows[v - 1].shape[0])],
            dtype=np.int64,
        )
        elements.append((v, coeffs @ rad.rows[v - 1] % algebra.p))
    sub = submodule_generated(cover, elements)
    return quotient(cover, sub)


@dataclass(frozen=True)
class SesDraw:
    sub: Module
    mid: Module
    quot: Module
    inclusion: ModuleHom
    projection: ModuleHom
    sub_rows: Submodule


def random_ses(module: Module, seed: int, gen_scale: float = 1.0) -> SesDraw:
    """0 -> L -> M -> N -> 0 with L generated by random elements of M."""
    rng = random.Random(seed)
    algebra = module.algebra
    n_gens = rng.randint(0, 3)
    n_gens = max(1, int(n_gens * gen_scale)) if n_gens else 0
    elements = []
    for _ in range(n_gens):
        supported = [v for v in algebra.quiver.vertices if module.dims[v - 1]]
        if not supported:
            break
        v = rng.choice(supported)
        vec = np.array(
            [rng.randrange(algebra.p) for _ in range(module.dims[v - 1])], dtype=np.int64
        )
        elements.append((v, vec))
    sub_rows = submodule_generated(module, elements)
    sub_mod, inclusion = sub_rows.to_module()
    quot, projection = quotient_with_projection(module, sub_rows)
    return SesDraw(sub_mod, module, quot, inclusion, projection, sub_rows)


def realize_module_spec(algebra, spec) -> Module:
    """Build the module named by a parsed specifier."""
    parts = []
    for part in spec.parts:
        if part[0] == "P":
            parts.append(projective(algebra, part[1]))
        elif part[0] == "S":
            parts.append(simple(algebra, part[1]))
        elif part[0] == "A":
            parts.append(_cached_regular(algebra))
        elif part[0] == "rand":
            parts.append(random_module(algebra, part[1], part[2]))
        else:
            raise QalgError(f"unhandled module spec part {part!r}")
    return direct_sum(parts, algebra=algebra)


# -- the checks ---------------------------------------------------------------


def _draw_v(rng: random.Random, algebra) -> tuple[int, ...]:
    roll = rng.random()
    if roll < 0.1:
        return ()
    if roll < 0.2:
        return tuple(algebra.quiver.vertices)
    return tuple(v for v in algebra.quiver.vertices if rng.random() < 0.45)


def _draw_finite_v(rng: random.Random, algebra) -> tuple[int, ...]:
    fin = classify_simples(algebra).finite_vertices
    return tuple(v for v in fin if rng.random() < 0.5)


def check_ses_layer_bounds(algebra, rng, params, gen_scale=1.0):
    from .bounds import exact_sequence_bound_check

    m = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    v = _draw_v(rng, algebra)
    ses = random_ses(m, rng.randrange(2**32), gen_scale)
    res = exact_sequence_bound_check(ses.sub, ses.mid, ses.quot, v)
    return res.passed, f"ll=({res.ll_sub},{res.ll_mid},{res.ll_quot}) V={v}"


def check_ses_loewy_bounds(algebra, rng, params, gen_scale=1.0):
    from .bounds import exact_sequence_bound_check

    m = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    ses = random_ses(m, rng.randrange(2**32), gen_scale)
    res = exact_sequence_bound_check(ses.sub, ses.mid, ses.quot, ())
    return res.passed, f"LL=({res.ll_sub},{res.ll_mid},{res.ll_quot})"


def _cached_layer_ideal(algebra, v, steps):
    cache = getattr(algebra, "_layer_ideal_cache", None)
    if cache is None:
        cache = {}
        algebra._layer_ideal_cache = cache
    key = (frozenset(v), steps)
    if key not in cache:
        cache[key] = torsion_layer_ideal(algebra, v, steps)
    return cache[key]


def check_lemma_ideal_action(algebra, rng, params, gen_scale=1.0):
    v = _draw_v(rng, algebra)
    steps = rng.randint(0, 4)
    x = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    ideal = _cached_layer_ideal(algebra, v, steps)
    direct = torsion_layer_submodule(x, v, steps)
    via_ideal = module_times_ideal(x, ideal)
    return direct == via_ideal, f"V={v} i={steps} dims={x.dims}"


def check_mono_epi_preservation(algebra, rng, params, gen_scale=1.0):
    m = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    v = _draw_v(rng, algebra)
    ses = random_ses(m, rng.randrange(2**32), gen_scale)
    vset = frozenset(v)
    gf = algebra.gf
    full = [np.eye(d, dtype=np.int64) for d in m.dims]
    t_sub = _sub_torsion_rows(m, ses.sub_rows.rows, vset)
    t_all = _sub_torsion_rows(m, full, vset)
    if not Submodule(m, t_all, check=False).contains(Submodule(m, t_sub, check=False)):
        return False, "torsion does not preserve the inclusion"
    r_sub = _sub_radical_rows(m, ses.sub_rows.rows)
    r_all = _sub_radical_rows(m, full)
    if not Submodule(m, r_all, check=False).contains(Submodule(m, r_sub, check=False)):
        return False, "radical does not preserve the inclusion"
    # epimorphism side: the projection must carry t(M) onto t(N), rad(M) onto rad(N)
    n = ses.quot
    tn = _sub_torsion_rows(n, [np.eye(d, dtype=np.int64) for d in n.dims], vset)
    rn = _sub_radical_rows(n, [np.eye(d, dtype=np.int64) for d in n.dims])
    for rows_m, rows_n, tag in ((t_all, tn, "torsion"), (r_all, rn, "radical")):
        for vtx in range(algebra.quiver.n):
            image = gf.row_space(rows_m[vtx] @ ses.projection.mats[vtx] % algebra.p)
            if not np.array_equal(image, rows_n[vtx]):
                return False, f"{tag} image mismatch at vertex {vtx + 1}"
    return True, ""


def check_shift_lemma(algebra, rng, params, gen_scale=1.0):
    m = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    v = _draw_v(rng, algebra)
    vset = frozenset(v)
    n = layer_length(m, v).value
    rows = [np.eye(d, dtype=np.int64) for d in m.dims]
    for j in range(n + 1):
        if j:
            rows = _sub_radical_rows(m, _sub_torsion_rows(m, rows, vset))
        layer_mod, _ = Submodule(m, rows, check=False).to_module()
        if layer_length(layer_mod, v).value != n - j:
            return False, f"shift failed at j={j}, n={n}"
    return True, f"n={n}"


def check_vanishing_lemma(algebra, rng, params, gen_scale=1.0):
    m = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    v = _draw_v(rng, algebra)
    n = layer_length(m, v).value
    sub = torsion_layer_submodule(m, v, n)
    return sub.is_zero(), f"n={n}"


def check_omega_lemma(algebra, rng, params, gen_scale=1.0):
    v = _draw_finite_v(rng, algebra)
    m = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    t = torsion_radical(m, v)
    if t.is_zero():
        return True, "vacuous: t_V(M) = 0"
    tm, _ = t.to_module()
    omega = syzygy(tm, 1)
    lhs = layer_length(omega, v).value
    rhs = layer_length(_cached_regular(algebra), v).value - 1
    return lhs <= rhs, f"ll(Omega tM)={lhs} vs ll(A)-1={rhs}"


def check_torsion_axioms(algebra, rng, params, gen_scale=1.0):
    v = _draw_v(rng, algebra)
    vset = set(v)
    m1 = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    m2 = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    t_sub = torsion_radical(m1, v)
    t_mod, _ = t_sub.to_module()
    f_mod = torsion_quotient(m2, v)
    if t_sub.total_dim + torsion_quotient(m1, v).total_dim != m1.total_dim:
        return False, "canonical sequence is not exact"
    for vtx in algebra.quiver.vertices:
        if vtx not in vset and f_mod.dims[vtx - 1]:
            return False, f"q(M) supported outside V at vertex {vtx}"
    tops = top_dims(t_mod)
    for vtx in vset:
        if tops[vtx - 1]:
            return False, f"top t(M) meets V at vertex {vtx}"
    if not t_mod.is_zero() and not f_mod.is_zero() and hom_space(t_mod, f_mod):
        return False, "Hom(T, F) != 0"
    # maximality: one-element extensions leave the torsion class
    base_elements = [
        (vtx, row) for vtx in algebra.quiver.vertices for row in t_sub.rows[vtx - 1]
    ]
    gf = algebra.gf
    for _ in range(3):
        supported = [vtx for vtx in algebra.quiver.vertices if m1.dims[vtx - 1]]
        if not supported:
            break
        vtx = rng.choice(supported)
        vec = np.array(
            [rng.randrange(algebra.p) for _ in range(m1.dims[vtx - 1])], dtype=np.int64
        )
        if not gf.reduce_mod_rows(t_sub.rows[vtx - 1], t_sub.pivots[vtx - 1], vec).any():
            continue  # already inside t(M)
        bigger = submodule_generated(m1, base_elements + [(vtx, vec)])
        big_mod, _ = bigger.to_module()
        big_tops = top_dims(big_mod)
        if not any(big_tops[u - 1] for u in vset):
            return False, f"extension at vertex {vtx} kept its top outside V"
    return True, ""


def check_idempotence(algebra, rng, params, gen_scale=1.0):
    m = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    v = _draw_v(rng, algebra)
    t_mod, _ = torsion_radical(m, v).to_module()
    again = torsion_radical(t_mod, v)
    return again.dims == t_mod.dims, f"dims {again.dims} vs {t_mod.dims}"


def check_syzygy_additivity(algebra, rng, params, gen_scale=1.0):
    x = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    y = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    m = rng.randint(1, 3)
    left = syzygy(direct_sum([x, y]), m)
    right = direct_sum([syzygy(x, m), syzygy(y, m)])
    return is_iso(left, right, seed=rng.randrange(2**32)), f"m={m}"


def check_stable_syzygy_lemma(algebra, rng, params, gen_scale=1.0):
    m = random_module(algebra, rng.randrange(2**32), params.module_budget, gen_scale)
    ses = random_ses(m, rng.randrange(2**32), gen_scale)
    x, y, z = ses.sub, ses.mid, ses.quot
    cutoff = 12
    checked = []
    pdz = pd(z, cutoff)
    if pdz.is_finite:
        step = max(0, pdz.value) + rng.randint(0, 1)
        a, _ = strip_projective_summands(syzygy(x, step))
        b, _ = strip_projective_summands(syzygy(y, step))
        if not is_iso(a, b, seed=rng.randrange(2**32)):
            return False, f"Omega^{step}(X) !~ Omega^{step}(Y), pd Z = {pdz.value}"
        checked.append("z")
    pdx = pd(x, cutoff)
    if pdx.is_finite:
        step = max(0, pdx.value) + rng.randint(0, 1) + 1
        a, _ = strip_projective_summands(syzygy(y, step))
        b, _ = strip_projective_summands(syzygy(z, step))
        if not is_iso(a, b, seed=rng.randrange(2**32)):
            return False, f"Omega^{step}(Y) !~ Omega^{step}(Z), pd X = {pdx.value}"
        checked.append("x")
    return True, "vacuous" if not checked else ",".join(checked)


def check_certificate(algebra, rng, params, gen_scale=1.0):
    from .bounds import syzygy_finiteness_certificate
    from .errors import HypothesisFailed, UndeterminedPd

    candidates = [classify_simples(algebra).finite_vertices]
    candidates.append(_draw_finite_v(rng, algebra))
    for v in candidates:
        try:
            report = syzygy_finiteness_certificate(
                algebra, v, samples=2, seed=rng.randrange(2**32)
            )
        except (HypothesisFailed, UndeterminedPd):
            continue
        return report.all_passed, f"V={v} k={report.k}"
    return True, "vacuous: no qualifying V"


CHECKS = {
    "ses-layer-bounds": check_ses_layer_bounds,
    "ses-loewy-bounds": check_ses_loewy_bounds,
    "lemma-ideal-action": check_lemma_ideal_action,
    "mono-epi-preservation": check_mono_epi_preservation,
    "shift-lemma": check_shift_lemma,
    "vanishing-lemma": check_vanishing_lemma,
    "omega-lemma": check_omega_lemma,
    "torsion-axioms": check_torsion_axioms,
    "idempotence": check_idempotence,
    "syzygy-additivity": check_syzygy_additivity,
    "stable-syzygy-lemma": check_stable_syzygy_lemma,
    "certificate": check_certificate,
}


# -- campaign -----------------------------------------------------------------


@dataclass(frozen=True)
class CheckFailure:
    check: str
    draw: int
    algebra_seed: int
    draw_seed: int
    detail: str
    repro: str
    qalg_file: str | None = None

    def as_json(self):
        return {
            "algebra_seed": self.algebra_seed,
            "check": self.check,
            "detail": self.detail,
            "draw": self.draw,
            "draw_seed": self.draw_seed,
            "qalg_file": self.qalg_file,
            "repro": self.repro,
        }


@dataclass
class CampaignResult:
    seed: int
    count: int
    counts: dict[str, dict[str, int]]
    failures: list[CheckFailure]
    kind: str = field(default="campaign", repr=False)

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "checks": {k: dict(v) for k, v in sorted(self.counts.items())},
            "count": self.count,
            "failures": [f.as_json() for f in self.failures],
            "seed": self.seed,
        }

    def to_text(self) -> str:
        lines = [f"campaign seed={self.seed} draws-per-check={self.count}"]
        for name in sorted(self.counts):
            c = self.counts[name]
            verdict = "ok" if c["fail"] == 0 else "FAIL"
            lines.append(f"  [{verdict}] {name}: {c['pass']} passed, {c['fail']} failed")
        for f in self.failures:
            lines.append(f"  failure: {f.check} draw={f.draw} detail={f.detail}")
            lines.append(f"    repro: {f.repro}")
            if f.qalg_file:
                lines.append(f"    minimized: {f.qalg_file}")
        lines.append("verdict: " + ("PASS" if self.all_passed else "FAIL"))
        return "\n".join(lines) + "\n"


def run_single(check: str, params: GenParams, algebra_seed: int, draw_seed: int, gen_scale: float = 1.0):
    """Re-run one draw exactly; used by the shrinker and by reproductions."""
    algebra = random_algebra(params, algebra_seed)
    rng = random.Random(draw_seed)
    return CHECKS[check](algebra, rng, params, gen_scale)


def run_campaign(
    params: GenParams,
    checks: list[str] | None = None,
    count: int | None = None,
    failures_dir: str | None = None,
) -> CampaignResult:
    """Run each named check `count` times over the rotating algebra pool."""
    names = list(checks) if checks else sorted(CHECKS)
    for name in names:
        if name not in CHECKS:
            raise QalgError(f"unknown check {name!r}; known: {', '.join(sorted(CHECKS))}")
    total = params.n_algebras * params.draws_per_algebra if count is None else count
    counts = {name: {"pass": 0, "fail": 0} for name in names}
    failures: list[CheckFailure] = []
    algebra_cache: dict[int, object] = {}

    def algebra_for(idx: int):
        if idx not in algebra_cache:
            algebra_cache[idx] = random_algebra(params, _mix(params.seed, "algebra", idx))
        return algebra_cache[idx]

    for name in names:
        for d in range(total):
            idx = d % max(1, params.n_algebras)
            algebra = algebra_for(idx)
            draw_seed = _mix(params.seed, name, d)
            rng = random.Random(draw_seed)
            try:
                passed, detail = CHECKS[name](algebra, rng, params)
            except Exception as exc:  # a crash is a failure, not an abort
                passed, detail = False, f"exception: {exc!r}"
            if passed:
                counts[name]["pass"] += 1
                continue
            counts[name]["fail"] += 1
            algebra_seed = _mix(params.seed, "algebra", idx)
            repro = (
                f"qalg fuzz --check {name} --seed {params.seed} "
                f"--algebras {params.n_algebras} --count {total}"
            )
            qalg_file = None
            if failures_dir is not None:
                qalg_file = _write_failure(
                    failures_dir, name, params, algebra_seed, draw_seed, detail, repro
                )
            failures.append(
                CheckFailure(name, d, algebra_seed, draw_seed, detail, repro, qalg_file)
            )
    result = CampaignResult(params.seed, total, counts, failures)
    if failures_dir is not None and failures:
        summary = FsPath(failures_dir) / "summary.json"
        summary.parent.mkdir(parents=True, exist_ok=True)
        summary.write_text(json.dumps(result.to_json_dict(), sort_keys=True, indent=2) + "\n")
    return result


def shrink_failure(check: str, params: GenParams, algebra_seed: int, draw_seed: int):
    """Smaller reproduction: scale down generator draws, then drop arrows."""
    quiver, relations, _ = random_presentation(params, algebra_seed)

    def still_fails(q, rels, scale) -> bool:
        try:
            algebra = compile_presentation(q, rels, params.modulus)
        except QalgError:
            return False
        rng = random.Random(draw_seed)
        try:
            passed, _ = CHECKS[check](algebra, rng, params, scale)
        except Exception:
            return True
        return not passed

    scale = 1.0
    while scale > 0.2 and still_fails(quiver, relations, scale / 2):
        scale /= 2
    progress = True
    while progress:
        progress = False
        for k in range(len(quiver.arrows)):
            keep = [a for i, a in enumerate(quiver.arrows) if i != k]
            smaller = Quiver(quiver.n, keep)
            index_map = {}
            for new_idx, arrow in enumerate(keep):
                index_map[quiver.arrow_index[arrow.name]] = new_idx
            kept_relations = []
            for rel in relations:
                terms = []
                ok = True
                for coeff, path in rel.terms:
                    if any(ai not in index_map for ai in path.arrows):
                        ok = False
                        break
                    from .quiver import Path

                    terms.append(
                        (coeff, Path(path.source, path.target, tuple(index_map[ai] for ai in path.arrows)))
                    )
                if ok and terms:
                    kept_relations.append(Relation(tuple(terms)))
            if still_fails(smaller, kept_relations, scale):
                quiver, relations = smaller, kept_relations
                progress = True
                break
    return quiver, relations, scale


def _write_failure(failures_dir, check, params, algebra_seed, draw_seed, detail, repro):
    from .qdsl import presentation_from_algebra, pretty_print

    quiver, relations, scale = shrink_failure(check, params, algebra_seed, draw_seed)
    ast = presentation_from_algebra(
        f"fail_{check.replace('-', '_')}_{draw_seed}", quiver, relations, params.modulus
    )
    directory = FsPath(failures_dir) / check
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / f"{draw_seed}.qalg"
    header = (
        f"# check: {check}\n# draw seed: {draw_seed}\n# algebra seed: {algebra_seed}\n"
        f"# generator scale: {scale}\n# detail: {detail}\n# repro: {repro}\n"
    )
    target.write_text(header + pretty_print(ast))
    return str(target)
