/**
 * Typed client for the curation service HTTP API.
 *
 * The interface is what views and the controller depend on; tests
 * substitute a recorded-session implementation.  Server errors carry
 * the service's own {code, message, detail} body so screens can surface
 * them verbatim.
 */

export interface SourceView {
    kind: string
    collectionId: string | null
    collectorName: string
    capturePeriod: { firstCapture: string; lastCapture: string } | null
}

export interface CommentView {
    id: string
    author: string
    body: string
    createdAt: string
}

export interface ReceiptView {
    requestedAt: string
    targetUrl: string
    accepted: boolean
}

export interface ResourceView {
    id: string
    url: string
    originalUrl: string
    title: string
    description: string
    author: string
    mediaType: string
    source: SourceView
    tags: string[]
    comments: CommentView[]
    customFields: Record<string, string>
    thumbnail: { state: string; imageRef: string | null }
    groupId: string
    archiveReceipt: ReceiptView | null
    crawlAnnotation: { frequency: string; depth: string; rationale: string } | null
    createdBy: string
    createdAt: string
}

export interface GroupSummary {
    id: string
    title: string
    description: string
    readOnly: boolean
    parentId: string | null
    resourceCount: number
}

export interface GroupView extends GroupSummary {
    createdBy: string
    createdAt: string
    members: { userId: string; role: string }[]
    subgroups: { id: string; title: string; resourceCount: number }[]
    resources: ResourceView[]
    page: number
    pageSize: number
}

export interface ActivityEventView {
    actor: string
    kind: string
    target: string
    at: string
}

export interface CaptureSummaryView {
    firstCapture: string
    lastCapture: string
    captureCount: number | null
}

export interface SearchHitView {
    resourceId: string
    score: number
    sourceBadge: string
    captureSummary: CaptureSummaryView | null
    resource: ResourceView | null
}

export interface LiveHitView {
    url: string
    title: string
    snippet: string
    mediaType: string
    provider: string
    archivalStatus: CaptureSummaryView | null
}

export interface SearchResponse {
    hits: SearchHitView[]
    facetCounts: Record<string, Record<string, number>>
    total: number
    page: number
    pageSize: number
    live: LiveHitView[]
    degraded: boolean
    warning: string | null
}

export interface CaptureView {
    urlkey: string
    timestamp: string
    original: string
    mimeType: string
    statusCode: number | null
    digest: string
    length: number
}

export interface TimelineView {
    granularity: string
    bins: { period: string; count: number }[]
    total: number
}

export interface CapturesResponse {
    captures: CaptureView[]
    timeline: TimelineView
}

export interface BulkTagResponse {
    appliedCount: number
    errors: { resourceId: string; code: string; message: string }[]
}

export interface SearchParams {
    q: string
    facets: { dimension: string; value: string }[]
    includeLive: boolean
    page?: number
}

export class ApiError extends Error {
    constructor(
        public status: number,
        public code: string,
        message: string,
        public detail: unknown = null,
    ) {
        super(message)
    }
}

export interface ApiClient {
    listGroups(): Promise<GroupSummary[]>
    getGroup(id: string, page?: number): Promise<GroupView>
    getActivity(groupId: string, limit?: number): Promise<ActivityEventView[]>
    getResource(id: string): Promise<ResourceView>
    getCaptures(resourceId: string, granularity: "year" | "month"): Promise<CapturesResponse>
    search(params: SearchParams): Promise<SearchResponse>
    archiveNow(resourceId: string): Promise<ReceiptView>
    bulkTag(resourceIds: string[], tag: string): Promise<BulkTagResponse>
    copyResource(groupId: string, resourceId: string): Promise<ResourceView>
    addLiveResource(groupId: string, hit: LiveHitView): Promise<ResourceView>
    addUploadResource(groupId: string, url: string, title?: string): Promise<ResourceView>
    removeResource(resourceId: string): Promise<void>
    copyGroup(groupId: string, title: string): Promise<GroupView>
    addTag(resourceId: string, label: string): Promise<ResourceView>
    removeTag(resourceId: string, label: string): Promise<ResourceView>
    addComment(resourceId: string, body: string): Promise<ResourceView>
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>

export class HttpApiClient implements ApiClient {
    constructor(
        private baseUrl: string,
        private token: string,
        private fetchImpl: FetchLike = (url, init) => fetch(url, init),
    ) {
        this.baseUrl = baseUrl.replace(/\/$/, "")
    }

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: RequestInit = {
            method,
            headers: {
                Authorization: `Bearer ${this.token}`,
                ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
            },
            ...(body !== undefined ? { body: JSON.stringify(body) } : {}),
        }
        const response = await this.fetchImpl(this.baseUrl + path, init)
        if (!response.ok) {
            let code = "httpError"
            let message = `${response.status}`
            let detail: unknown = null
            try {
                const payload = (await response.json()) as {
                    code?: string
                    message?: string
                    detail?: unknown
                }
                code = payload.code ?? code
                message = payload.message ?? message
                detail = payload.detail ?? null
            } catch {
                // non-JSON error body; keep the status text
            }
            throw new ApiError(response.status, code, message, detail)
        }
        return (await response.json()) as T
    }

    listGroups(): Promise<GroupSummary[]> {
        return this.request("GET", "/groups")
    }

    getGroup(id: string, page = 1): Promise<GroupView> {
        return this.request("GET", `/groups/${encodeURIComponent(id)}?page=${page}`)
    }

    getActivity(groupId: string, limit = 20): Promise<ActivityEventView[]> {
        return this.request("GET", `/groups/${encodeURIComponent(groupId)}/activity?limit=${limit}`)
    }

    getResource(id: string): Promise<ResourceView> {
        return this.request("GET", `/resources/${encodeURIComponent(id)}`)
    }

    getCaptures(resourceId: string, granularity: "year" | "month"): Promise<CapturesResponse> {
        return this.request(
            "GET",
            `/resources/${encodeURIComponent(resourceId)}/captures?granularity=${granularity}`,
        )
    }

    search(params: SearchParams): Promise<SearchResponse> {
        const query = new URLSearchParams()
        query.set("q", params.q)
        for (const facet of params.facets) query.append("facets", `${facet.dimension}:${facet.value}`)
        if (params.includeLive) query.set("includeLive", "true")
        if (params.page) query.set("page", String(params.page))
        return this.request("GET", `/search?${query.toString()}`)
    }

    archiveNow(resourceId: string): Promise<ReceiptView> {
        return this.request("POST", `/resources/${encodeURIComponent(resourceId)}/archive-now`)
    }

    bulkTag(resourceIds: string[], tag: string): Promise<BulkTagResponse> {
        return this.request("POST", "/resources/bulk/tag", { resourceIds, tag })
    }

    copyResource(groupId: string, resourceId: string): Promise<ResourceView> {
        return this.request("POST", `/groups/${encodeURIComponent(groupId)}/resources`, {
            kind: "copy",
            resourceId,
        })
    }

    addLiveResource(groupId: string, hit: LiveHitView): Promise<ResourceView> {
        return this.request("POST", `/groups/${encodeURIComponent(groupId)}/resources`, {
            kind: "live",
            url: hit.url,
            title: hit.title,
            snippet: hit.snippet,
            mediaType: hit.mediaType,
            provider: hit.provider,
        })
    }

    addUploadResource(groupId: string, url: string, title = ""): Promise<ResourceView> {
        return this.request("POST", `/groups/${encodeURIComponent(groupId)}/resources`, {
            kind: "upload",
            url,
            title,
        })
    }

    async removeResource(resourceId: string): Promise<void> {
        await this.request("DELETE", `/resources/${encodeURIComponent(resourceId)}`)
    }

    copyGroup(groupId: string, title: string): Promise<GroupView> {
        return this.request("POST", `/groups/${encodeURIComponent(groupId)}/copy`, { title })
    }

    addTag(resourceId: string, label: string): Promise<ResourceView> {
        return this.request("POST", `/resources/${encodeURIComponent(resourceId)}/tags`, { label })
    }

    removeTag(resourceId: string, label: string): Promise<ResourceView> {
        return this.request(
            "DELETE",
            `/resources/${encodeURIComponent(resourceId)}/tags/${encodeURIComponent(label)}`,
        )
    }

    addComment(resourceId: string, body: string): Promise<ResourceView> {
        return this.request("POST", `/resources/${encodeURIComponent(resourceId)}/comments`, { body })
    }
}
