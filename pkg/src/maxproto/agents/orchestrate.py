"""Full-pass orchestration and targeted regeneration.

One pass is strictly sequential: the theme seeds the cache, then each
component is dispatched in document order, its composed prompt is
logged, and its rendered result is prepended to the cache before the
next component runs. Regeneration reruns exactly one handler against a
cache rebuilt from every other component's current result, so nothing
else changes, byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..backends.base import BackendBundle, derive_seed
from ..errors import InputError, MaxprotoError, PartialPrototypeError
from ..kb import KnowledgeStore, RetrievalConfig
from ..model import GenerationRequest, Payload, Prototype, ProvenanceRecord, ComponentResult
from .cache import DEFAULT_CACHE_BUDGET, CachePool, cache_append
from .subagents import run_handler
from .templates import TemplateSet
from .theme import ThemeOutcome, generate_theme


@dataclass(frozen=True)
class GenerationOptions:
    image_width: int = 512
    image_height: int = 512
    cache_budget: int = DEFAULT_CACHE_BUDGET
    retrieval: RetrievalConfig = RetrievalConfig()


def orchestrate(
    req: GenerationRequest,
    ui_store: KnowledgeStore,
    icon_store: KnowledgeStore | None,
    backends: BackendBundle,
    *,
    templates: TemplateSet | None = None,
    options: GenerationOptions = GenerationOptions(),
    theme_outcome: ThemeOutcome | None = None,
) -> Prototype:
    """Theme first, then every component in order through its handler.

    A pre-computed ``theme_outcome`` (e.g. from session creation) is
    reused as-is; otherwise the theme agent runs here. Any component
    failure aborts with a :class:`PartialPrototypeError` carrying the
    results completed so far.
    """
    if theme_outcome is None:
        theme_outcome = generate_theme(
            req,
            ui_store,
            backends,
            templates=templates,
            retrieval=options.retrieval,
            image_width=options.image_width,
            image_height=options.image_height,
        )
    theme, theme_raster = theme_outcome.theme, theme_outcome.raster
    master = req.seed if req.seed is not None else 0

    cache = CachePool.seeded(theme, options.cache_budget)
    results: list = []
    provenance: list[ProvenanceRecord] = []
    for comp in req.wireframe.components:
        seed = derive_seed(master, comp.id, "attempt", 0)
        try:
            result, prov = run_handler(
                comp, theme, theme_raster, cache, backends, icon_store,
                seed=seed, templates=templates,
            )
        except MaxprotoError as exc:
            raise PartialPrototypeError(
                f"generation failed at component {comp.id!r}: {exc}",
                completed=results,
                failed_component_id=comp.id,
                cause=exc,
            ) from exc
        results.append(result)
        provenance.append(prov)
        cache = cache_append(cache, result)

    return Prototype(
        theme=theme,
        theme_image=theme_raster,
        results=tuple(results),
        provenance=tuple(provenance),
        theme_provenance=theme_outcome.provenance,
        master_seed=master,
    )


def rebuild_cache_for(
    prototype: Prototype,
    req: GenerationRequest,
    component_id: str,
    cache_budget: int = DEFAULT_CACHE_BUDGET,
) -> CachePool:
    """Cache as seen by a regeneration of ``component_id``: the theme
    summary plus every other component's current result, most recent
    first."""
    cache = CachePool.seeded(prototype.theme, cache_budget)
    for comp in req.wireframe.components:
        if comp.id == component_id:
            continue
        cache = cache_append(cache, prototype.get_result(comp.id))
    return cache


def regenerate_component(
    prototype: Prototype,
    req: GenerationRequest,
    component_id: str,
    backends: BackendBundle,
    icon_store: KnowledgeStore | None,
    *,
    override: str | None = None,
    attempt: int = 1,
    templates: TemplateSet | None = None,
    options: GenerationOptions = GenerationOptions(),
) -> Prototype:
    """Rerun one component's handler; every other result is untouched.

    ``attempt`` feeds the derived seed, so equal attempts with equal
    overrides reproduce identical results.
    """
    try:
        comp = req.wireframe.get(component_id)
    except KeyError:
        raise InputError(f"unknown component id {component_id!r}") from None
    cache = rebuild_cache_for(prototype, req, component_id, options.cache_budget)
    seed = derive_seed(prototype.master_seed, component_id, "attempt", attempt)
    result, prov = run_handler(
        comp, prototype.theme, prototype.theme_image, cache, backends, icon_store,
        seed=seed, templates=templates, override=override,
    )
    return _with_replacement(prototype, result, prov)


def replace_component_payload(
    prototype: Prototype, component_id: str, payload: Payload
) -> Prototype:
    """Manual-edit path: overwrite one payload directly.

    Payload kind is still validated against the component type.
    """
    try:
        current = prototype.get_result(component_id)
        prov = prototype.get_provenance(component_id)
    except KeyError:
        raise InputError(f"unknown component id {component_id!r}") from None
    result = ComponentResult(component_id, current.ctype, current.bbox, payload)
    new_prov = replace(prov, notes=prov.notes + ("manual payload edit",))
    return _with_replacement(prototype, result, new_prov)


def _with_replacement(
    prototype: Prototype, result: ComponentResult, prov: ProvenanceRecord
) -> Prototype:
    results = tuple(
        result if r.component_id == result.component_id else r for r in prototype.results
    )
    provenance = tuple(
        prov if p.component_id == prov.component_id else p for p in prototype.provenance
    )
    return replace(prototype, results=results, provenance=provenance)
