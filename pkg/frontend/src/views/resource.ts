/**
 * Resource detail: capture list + timeline, tags, discussion, archive-now.
 *
 * The timeline draws one bar per server-provided bin (year by default,
 * month when zoomed); counts are never recomputed client-side.
 */

import { CapturesResponse, ResourceView } from "../api.js"
import { h, VNode } from "../vdom.js"

export interface ResourceScreenProps {
    resource: ResourceView
    captures: CapturesResponse | null
    granularity: "year" | "month"
    editable: boolean
    onArchiveNow: () => void
    onGranularity: (granularity: "year" | "month") => void
    onAddTag: (label: string) => void
    onRemoveTag: (label: string) => void
    onAddComment: (body: string) => void
}

function timeline(captures: CapturesResponse): VNode {
    const bins = captures.timeline.bins
    const max = Math.max(1, ...bins.map((bin) => bin.count))
    return h(
        "div.timeline",
        {},
        bins.map((bin) =>
            h(
                "div.bin",
                {
                    "data-period": bin.period,
                    "data-count": String(bin.count),
                    style: `height: ${Math.round((bin.count / max) * 100)}%`,
                    title: `${bin.period}: ${bin.count}`,
                },
                h("span.bin-label", {}, bin.period),
            ),
        ),
    )
}

function captureSection(props: ResourceScreenProps): VNode {
    const captures = props.captures
    if (captures === null) {
        return h("section.captures", {}, h("p.loading", {}, "loading captures..."))
    }
    if (captures.captures.length === 0) {
        return h(
            "section.captures.never-archived",
            {},
            h("p", {}, "Never archived"),
            h("button.archive-now.emphasized", { onclick: () => props.onArchiveNow() }, "Archive Now"),
        )
    }
    return h(
        "section.captures",
        {},
        h(
            "div.capture-controls",
            {},
            h(
                `button.zoom-year${props.granularity === "year" ? ".current" : ""}`,
                { onclick: () => props.onGranularity("year") },
                "year",
            ),
            h(
                `button.zoom-month${props.granularity === "month" ? ".current" : ""}`,
                { onclick: () => props.onGranularity("month") },
                "month",
            ),
            h("button.archive-now", { onclick: () => props.onArchiveNow() }, "Archive Now"),
        ),
        timeline(captures),
        h(
            "table.capture-list",
            {},
            h("tr", {}, h("th", {}, "timestamp"), h("th", {}, "status"), h("th", {}, "type")),
            captures.captures.map((capture) =>
                h(
                    "tr.capture",
                    {},
                    h("td", {}, capture.timestamp),
                    h("td", {}, capture.statusCode === null ? "-" : String(capture.statusCode)),
                    h("td", {}, capture.mimeType),
                ),
            ),
        ),
    )
}

function tagsSection(props: ResourceScreenProps): VNode {
    return h(
        "section.tags",
        {},
        props.resource.tags.map((tag) =>
            h(
                "span.tag",
                { "data-tag": tag },
                tag,
                props.editable &&
                    h("button.remove-tag", { onclick: () => props.onRemoveTag(tag) }, "x"),
            ),
        ),
        props.editable &&
            h(
                "form.add-tag",
                {
                    onsubmit: (event?: unknown) => {
                        ;(event as Event | undefined)?.preventDefault?.()
                        const input = document.getElementById("tag-input") as HTMLInputElement | null
                        if (input?.value) props.onAddTag(input.value)
                    },
                },
                h("input", { id: "tag-input", placeholder: "add tag" }),
                h("button.tag-submit", { type: "submit" }, "Tag"),
            ),
    )
}

function discussionSection(props: ResourceScreenProps): VNode {
    return h(
        "section.discussion",
        {},
        h("h3", {}, "Discussion"),
        h(
            "ul.comments",
            {},
            props.resource.comments.map((comment) =>
                h(
                    "li.comment",
                    {},
                    h("span.comment-author", {}, comment.author),
                    h("span.comment-body", {}, comment.body),
                    h("span.comment-at", {}, comment.createdAt),
                ),
            ),
        ),
        props.editable &&
            h(
                "form.comment-box",
                {
                    onsubmit: (event?: unknown) => {
                        ;(event as Event | undefined)?.preventDefault?.()
                        const box = document.getElementById("comment-input") as HTMLInputElement | null
                        if (box?.value) props.onAddComment(box.value)
                    },
                },
                h("input", { id: "comment-input", placeholder: "discuss this seed" }),
                h("button.comment-submit", { type: "submit" }, "Comment"),
            ),
    )
}

export function renderResourceScreen(props: ResourceScreenProps): VNode {
    const resource = props.resource
    const receipt = resource.archiveReceipt
    return h(
        "div.resource-screen",
        { "data-resource": resource.id },
        h(
            "header.resource-header",
            {},
            h("h2", {}, resource.title || resource.originalUrl),
            h("a.original-url", { href: resource.originalUrl }, resource.originalUrl),
            h("p.description", {}, resource.description),
            resource.author && h("p.author", {}, `by ${resource.author}`),
            h("span.badge.source", {}, resource.source.collectorName || resource.source.kind),
        ),
        receipt &&
            h(
                "div.receipt",
                {},
                `archive request ${receipt.accepted ? "accepted" : "failed"} at ${receipt.requestedAt}`,
            ),
        captureSection(props),
        tagsSection(props),
        props.resource.crawlAnnotation &&
            h(
                "div.crawl-annotation",
                {},
                `crawl ${props.resource.crawlAnnotation.frequency}, ${props.resource.crawlAnnotation.depth}`,
            ),
        discussionSection(props),
    )
}
