/**
 * Search screen: badged result list, facet sidebar, live-web toggle.
 *
 * Archived-only by default; live hits are appended after archived hits
 * with their archival-status line and a copy-to-group action.  When the
 * live side degrades, the banner appears but archived results stay.
 * Server errors are surfaced verbatim.
 */

import { ApiError, LiveHitView, SearchHitView, SearchResponse } from "../api.js"
import { FacetSelection } from "../state.js"
import { h, VNode } from "../vdom.js"

export interface SearchScreenProps {
    query: string
    facets: FacetSelection[]
    includeLive: boolean
    result: SearchResponse | null
    error: ApiError | null
    onSearch: (query: string) => void
    onToggleLive: () => void
    onToggleFacet: (dimension: string, value: string) => void
    onOpenResource: (resourceId: string) => void
    onToggleSelect: (resourceId: string) => void
    onCopyLiveHit: (hit: LiveHitView) => void
    onPage: (page: number) => void
}

function facetSidebar(props: SearchScreenProps): VNode | false {
    if (!props.result) return false
    const dimensions = Object.entries(props.result.facetCounts)
    return h(
        "aside.facets",
        {},
        dimensions.map(([dimension, values]) =>
            h(
                "div.facet-dimension",
                { "data-dimension": dimension },
                h("h4", {}, dimension),
                h(
                    "ul",
                    {},
                    Object.entries(values)
                        .sort((a, b) => b[1] - a[1])
                        .slice(0, 12)
                        .map(([value, count]) => {
                            const active = props.facets.some(
                                (f) => f.dimension === dimension && f.value === value,
                            )
                            return h(
                                `li.facet-value${active ? ".active" : ""}`,
                                { onclick: () => props.onToggleFacet(dimension, value) },
                                `${value} (${count})`,
                            )
                        }),
                ),
            ),
        ),
    )
}

function captureLine(summary: { firstCapture: string; lastCapture: string; captureCount: number | null }): string {
    const count = summary.captureCount === null ? "" : `${summary.captureCount} captures, `
    return `${count}${summary.firstCapture} to ${summary.lastCapture}`
}

function archivedHit(hit: SearchHitView, props: SearchScreenProps): VNode {
    const resource = hit.resource
    return h(
        "li.hit.archived",
        { "data-resource": hit.resourceId },
        h("input.select-box", {
            type: "checkbox",
            onchange: () => props.onToggleSelect(hit.resourceId),
        }),
        h(
            "a.hit-title",
            { href: "#", onclick: () => props.onOpenResource(hit.resourceId) },
            resource?.title || hit.resourceId,
        ),
        h("span.badge.source-badge", {}, hit.sourceBadge),
        hit.captureSummary && h("span.capture-summary", {}, captureLine(hit.captureSummary)),
        resource && h("p.hit-description", {}, resource.description),
    )
}

function liveHit(hit: LiveHitView, props: SearchScreenProps): VNode {
    return h(
        "li.hit.live",
        { "data-url": hit.url },
        h("a.hit-title", { href: hit.url }, hit.title || hit.url),
        h("span.badge.live-badge", {}, `live web: ${hit.provider}`),
        h(
            "span.archival-status",
            {},
            hit.archivalStatus ? `archived: ${captureLine(hit.archivalStatus)}` : "never archived",
        ),
        h("p.hit-description", {}, hit.snippet),
        h("button.copy-to-group", { onclick: () => props.onCopyLiveHit(hit) }, "Copy to group"),
    )
}

export function renderSearchScreen(props: SearchScreenProps): VNode {
    const result = props.result
    return h(
        "div.search-screen",
        {},
        h(
            "form.search-box",
            {
                onsubmit: (event?: unknown) => {
                    ;(event as Event | undefined)?.preventDefault?.()
                    const box = document.getElementById("search-input") as HTMLInputElement | null
                    props.onSearch(box?.value ?? "")
                },
            },
            h("input", { id: "search-input", value: props.query, placeholder: "search collections" }),
            h("button.search-submit", { type: "submit" }, "Search"),
            h(
                "label.include-live",
                {},
                h("input.live-toggle", {
                    type: "checkbox",
                    ...(props.includeLive ? { checked: "checked" } : {}),
                    onchange: () => props.onToggleLive(),
                }),
                "include live web",
            ),
        ),
        h(
            "div.active-facets",
            {},
            props.facets.map((facet) =>
                h(
                    "span.facet-chip",
                    { onclick: () => props.onToggleFacet(facet.dimension, facet.value) },
                    `${facet.dimension}: ${facet.value} ✕`,
                ),
            ),
        ),
        props.error &&
            h(
                "div.banner.error",
                {},
                `${props.error.code}: ${props.error.message}`,
                props.error.status >= 500 ? " (archived results may be stale)" : "",
            ),
        result?.degraded &&
            h("div.banner.degraded", {}, result.warning ?? "live web unavailable; archived results only"),
        h(
            "div.search-body",
            {},
            facetSidebar(props),
            result &&
                h(
                    "main.results",
                    {},
                    h("p.total", {}, `${result.total} archived results`),
                    h("ul.hit-list", {}, result.hits.map((hit) => archivedHit(hit, props))),
                    result.live.length > 0 &&
                        h(
                            "section.live-results",
                            {},
                            h("h3", {}, "From the live web"),
                            h("ul.hit-list.live", {}, result.live.map((hit) => liveHit(hit, props))),
                        ),
                    result.total > result.pageSize &&
                        h(
                            "nav.pager",
                            {},
                            Array.from(
                                { length: Math.ceil(result.total / result.pageSize) },
                                (_, i) =>
                                    h(
                                        `button.page${result.page === i + 1 ? ".current" : ""}`,
                                        { onclick: () => props.onPage(i + 1) },
                                        String(i + 1),
                                    ),
                            ),
                        ),
                ),
        ),
    )
}
