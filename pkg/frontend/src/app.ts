/**
 * Controller: fetches from the API, keeps ViewState, renders screens.
 *
 * Concurrent in-flight requests are allowed; a StaleGuard ticket makes
 * sure only the most recent navigation's response reaches the DOM.
 */

import {
    ApiClient,
    ApiError,
    CapturesResponse,
    GroupSummary,
    LiveHitView,
    SearchResponse,
} from "./api.js"
import { clearSelection, initialState, StaleGuard, toggleFacet, toggleSelection, ViewState } from "./state.js"
import { renderBulkBar } from "./views/bulkbar.js"
import { renderGroupScreen } from "./views/group.js"
import { renderResourceScreen } from "./views/resource.js"
import { renderSearchScreen } from "./views/search.js"
import { h, toDom, VNode } from "./vdom.js"

type Screen =
    | { kind: "home" }
    | { kind: "search" }
    | { kind: "group"; id: string; page: number }
    | { kind: "resource"; id: string }

export class App {
    state: ViewState = initialState()
    private screen: Screen = { kind: "home" }
    private guard = new StaleGuard()
    private bulkReport: import("./api.js").BulkTagResponse | null = null
    private groups: GroupSummary[] = []

    constructor(
        private api: ApiClient,
        private root: Element,
    ) {}

    async start(): Promise<void> {
        this.groups = await this.api.listGroups()
        this.renderHome()
    }

    private mount(tree: VNode): void {
        const bulk = renderBulkBar({
            selection: this.state.selection,
            report: this.bulkReport,
            groupChoices: this.groups.filter((g) => !g.readOnly),
            onBulkTag: (label) => void this.runBulkTag(label),
            onAddToGroup: (groupId) => void this.runAddToGroup(groupId),
            onClear: () => {
                this.state = clearSelection(this.state)
                this.bulkReport = null
                this.rerender()
            },
        })
        const page = h("div.app", {}, this.navBar(), tree, bulk ?? false)
        this.root.replaceChildren(toDom(page))
    }

    private navBar(): VNode {
        return h(
            "nav.top",
            {},
            h("a.nav-home", { href: "#", onclick: () => void this.renderHome() }, "Groups"),
            h("a.nav-search", { href: "#", onclick: () => void this.showSearch() }, "Search"),
        )
    }

    // -- screens -----------------------------------------------------------

    renderHome(): void {
        this.screen = { kind: "home" }
        const ticket = this.guard.begin()
        void this.api.listGroups().then((groups) => {
            if (!this.guard.isCurrent(ticket)) return
            this.groups = groups
            this.mount(
                h(
                    "div.home-screen",
                    {},
                    h("h2", {}, "Collections and groups"),
                    h(
                        "ul.group-list",
                        {},
                        groups.map((group) =>
                            h(
                                "li.group-row",
                                {},
                                h(
                                    "a.group-link",
                                    { href: "#", onclick: () => void this.showGroup(group.id) },
                                    group.title,
                                ),
                                h("span.count", {}, ` ${group.resourceCount} resources`),
                                group.readOnly && h("span.badge.read-only", {}, "read-only"),
                            ),
                        ),
                    ),
                ),
            )
        })
    }

    showSearch(): void {
        this.screen = { kind: "search" }
        this.renderSearch(null, null)
    }

    private renderSearch(result: SearchResponse | null, error: ApiError | null): void {
        this.mount(
            renderSearchScreen({
                query: this.state.query,
                facets: this.state.facets,
                includeLive: this.state.includeLive,
                result,
                error,
                onSearch: (query) => {
                    this.state = { ...this.state, query }
                    void this.runSearch()
                },
                onToggleLive: () => {
                    this.state = { ...this.state, includeLive: !this.state.includeLive }
                    void this.runSearch()
                },
                onToggleFacet: (dimension, value) => {
                    this.state = toggleFacet(this.state, dimension, value)
                    void this.runSearch()
                },
                onOpenResource: (id) => void this.showResource(id),
                onToggleSelect: (id) => {
                    this.state = toggleSelection(this.state, id)
                    this.rerender()
                },
                onCopyLiveHit: (hit) => void this.copyLiveHit(hit),
                onPage: (page) => void this.runSearch(page),
            }),
        )
    }

    async runSearch(page = 1): Promise<void> {
        const ticket = this.guard.begin()
        try {
            const result = await this.api.search({
                q: this.state.query,
                facets: this.state.facets,
                includeLive: this.state.includeLive,
                page,
            })
            if (!this.guard.isCurrent(ticket)) return
            this.renderSearch(result, null)
        } catch (error) {
            if (!this.guard.isCurrent(ticket)) return
            this.renderSearch(null, error instanceof ApiError ? error : new ApiError(0, "network", String(error)))
        }
    }

    async showGroup(id: string, page = 1): Promise<void> {
        this.screen = { kind: "group", id, page }
        const ticket = this.guard.begin()
        const [group, activity] = await Promise.all([
            this.api.getGroup(id, page),
            this.api.getActivity(id).catch(() => []),
        ])
        if (!this.guard.isCurrent(ticket)) return
        this.state = { ...this.state, selectedGroup: id }
        this.mount(
            renderGroupScreen({
                group,
                activity,
                selection: this.state.selection,
                onOpenResource: (rid) => void this.showResource(rid),
                onToggleSelect: (rid) => {
                    this.state = toggleSelection(this.state, rid)
                    this.rerender()
                },
                onPage: (next) => void this.showGroup(id, next),
                onCopyGroup: () => void this.copyGroup(group.id, group.title),
                onAddUpload: (url) =>
                    void this.api.addUploadResource(id, url).then(() => this.showGroup(id, page)),
                onRemoveResource: (rid) =>
                    void this.api.removeResource(rid).then(() => this.showGroup(id, page)),
            }),
        )
    }

    async showResource(id: string): Promise<void> {
        this.screen = { kind: "resource", id }
        const ticket = this.guard.begin()
        const resource = await this.api.getResource(id)
        const group = await this.api.getGroup(resource.groupId).catch(() => null)
        let captures: CapturesResponse | null = null
        try {
            captures = await this.api.getCaptures(id, "year")
        } catch {
            captures = null // capture service degraded; detail still renders
        }
        if (!this.guard.isCurrent(ticket)) return
        this.state = { ...this.state, selectedResource: id }
        this.renderResource(resource, captures, "year", group ? !group.readOnly : false)
    }

    private renderResource(
        resource: import("./api.js").ResourceView,
        captures: CapturesResponse | null,
        granularity: "year" | "month",
        editable: boolean,
    ): void {
        this.mount(
            renderResourceScreen({
                resource,
                captures,
                granularity,
                editable,
                onArchiveNow: () => void this.archiveNow(resource.id),
                onGranularity: (g) => void this.reloadCaptures(resource, g, editable),
                onAddTag: (label) => void this.api.addTag(resource.id, label).then(() => this.showResource(resource.id)),
                onRemoveTag: (label) =>
                    void this.api.removeTag(resource.id, label).then(() => this.showResource(resource.id)),
                onAddComment: (body) =>
                    void this.api.addComment(resource.id, body).then(() => this.showResource(resource.id)),
            }),
        )
    }

    private async reloadCaptures(
        resource: import("./api.js").ResourceView,
        granularity: "year" | "month",
        editable: boolean,
    ): Promise<void> {
        const ticket = this.guard.begin()
        const captures = await this.api.getCaptures(resource.id, granularity).catch(() => null)
        if (!this.guard.isCurrent(ticket)) return
        this.renderResource(resource, captures, granularity, editable)
    }

    private async archiveNow(resourceId: string): Promise<void> {
        await this.api.archiveNow(resourceId)
        await this.showResource(resourceId) // re-fetch; receipt now rendered
    }

    private async copyGroup(groupId: string, title: string): Promise<void> {
        const copy = await this.api.copyGroup(groupId, `Copy of ${title}`)
        await this.showGroup(copy.id)
    }

    private async copyLiveHit(hit: LiveHitView): Promise<void> {
        const target = this.groups.find((g) => !g.readOnly)
        if (!target) return
        await this.api.addLiveResource(target.id, hit)
        await this.showGroup(target.id)
    }

    private async runBulkTag(label: string): Promise<void> {
        this.bulkReport = await this.api.bulkTag(this.state.selection, label)
        this.rerender()
    }

    private async runAddToGroup(groupId: string): Promise<void> {
        let applied = 0
        const errors: { resourceId: string; code: string; message: string }[] = []
        for (const rid of this.state.selection) {
            try {
                await this.api.copyResource(groupId, rid)
                applied += 1
            } catch (error) {
                const apiError = error instanceof ApiError ? error : new ApiError(0, "network", String(error))
                errors.push({ resourceId: rid, code: apiError.code, message: apiError.message })
            }
        }
        this.bulkReport = { appliedCount: applied, errors }
        this.rerender()
    }

    private rerender(): void {
        switch (this.screen.kind) {
            case "home":
                this.renderHome()
                break
            case "search":
                void this.runSearch()
                break
            case "group":
                void this.showGroup(this.screen.id, this.screen.page)
                break
            case "resource":
                void this.showResource(this.screen.id)
                break
        }
    }
}
