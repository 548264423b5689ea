/**
 * Test support: an ApiClient that replays the recorded API session from
 * fixtures/session.json, plus no-op callback bundles for render props.
 */

import {
    ActivityEventView,
    ApiClient,
    ApiError,
    BulkTagResponse,
    CapturesResponse,
    GroupSummary,
    GroupView,
    LiveHitView,
    ReceiptView,
    ResourceView,
    SearchParams,
    SearchResponse,
} from "../src/api.js"
import session from "./fixtures/session.json"

export interface RecordedSession {
    meta: {
        readOnlyGroup: string
        editableGroup: string
        deadResource: string
        capturedResource: string
        neverArchivedResource: string
        bulkSelection: string[]
    }
    groupList: GroupSummary[]
    groups: Record<string, Record<string, GroupView>>
    activity: Record<string, ActivityEventView[]>
    resources: Record<string, ResourceView>
    captures: Record<string, CapturesResponse>
    search: Record<string, SearchResponse>
    bulkTag: BulkTagResponse
    archiveReceipt: ReceiptView
}

export const recorded = session as unknown as RecordedSession

export class RecordedApi implements ApiClient {
    constructor(private data: RecordedSession = recorded) {}

    private missing(what: string): never {
        throw new ApiError(404, "notFound", `not in recorded session: ${what}`)
    }

    async listGroups(): Promise<GroupSummary[]> {
        return this.data.groupList
    }

    async getGroup(id: string, page = 1): Promise<GroupView> {
        const pages = this.data.groups[id] ?? this.missing(`group ${id}`)
        return pages[String(page)] ?? this.missing(`group ${id} page ${page}`)
    }

    async getActivity(groupId: string): Promise<ActivityEventView[]> {
        return this.data.activity[groupId] ?? []
    }

    async getResource(id: string): Promise<ResourceView> {
        return this.data.resources[id] ?? this.missing(`resource ${id}`)
    }

    async getCaptures(resourceId: string, granularity: "year" | "month"): Promise<CapturesResponse> {
        return (
            this.data.captures[`${resourceId}:${granularity}`] ??
            this.missing(`captures ${resourceId}:${granularity}`)
        )
    }

    async search(params: SearchParams): Promise<SearchResponse> {
        const key = params.includeLive ? `${params.q}+live` : params.q
        return this.data.search[key] ?? this.missing(`search ${key}`)
    }

    async archiveNow(): Promise<ReceiptView> {
        return this.data.archiveReceipt
    }

    async bulkTag(): Promise<BulkTagResponse> {
        return this.data.bulkTag
    }

    async copyResource(): Promise<ResourceView> {
        return this.missing("copyResource is not recorded")
    }

    async addLiveResource(_groupId: string, _hit: LiveHitView): Promise<ResourceView> {
        return this.missing("addLiveResource is not recorded")
    }

    async addUploadResource(): Promise<ResourceView> {
        return this.missing("addUploadResource is not recorded")
    }

    async removeResource(): Promise<void> {
        this.missing("removeResource is not recorded")
    }

    async copyGroup(): Promise<GroupView> {
        return this.missing("copyGroup is not recorded")
    }

    async addTag(): Promise<ResourceView> {
        return this.missing("addTag is not recorded")
    }

    async removeTag(): Promise<ResourceView> {
        return this.missing("removeTag is not recorded")
    }

    async addComment(): Promise<ResourceView> {
        return this.missing("addComment is not recorded")
    }
}

export const noop = (): void => undefined

export const groupCallbacks = {
    onOpenResource: noop,
    onToggleSelect: noop,
    onPage: noop,
    onCopyGroup: noop,
    onAddUpload: noop,
    onRemoveResource: noop,
}

export const resourceCallbacks = {
    onArchiveNow: noop,
    onGranularity: noop,
    onAddTag: noop,
    onRemoveTag: noop,
    onAddComment: noop,
}

export const searchCallbacks = {
    onSearch: noop,
    onToggleLive: noop,
    onToggleFacet: noop,
    onOpenResource: noop,
    onToggleSelect: noop,
    onCopyLiveHit: noop,
    onPage: noop,
}
