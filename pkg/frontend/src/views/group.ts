/**
 * Group screen: thumbnail grid plus activity summary.
 *
 * Every mutating control is gated on the server's readOnly flag; a
 * read-only group renders browse/copy affordances only.  Dead pages
 * show the archive's exact placeholder text on their tile.
 */

import { ActivityEventView, GroupView, ResourceView } from "../api.js"
import { h, VNode } from "../vdom.js"

export const DEAD_PAGE_TEXT = "The page is no longer available on the web"

export interface GroupScreenProps {
    group: GroupView
    activity: ActivityEventView[]
    selection: string[]
    onOpenResource: (resourceId: string) => void
    onToggleSelect: (resourceId: string) => void
    onPage: (page: number) => void
    onCopyGroup: () => void
    onAddUpload: (url: string) => void
    onRemoveResource: (resourceId: string) => void
}

function thumbnail(resource: ResourceView): VNode {
    if (resource.thumbnail.state === "deadPage") {
        return h("div.thumb.dead", {}, DEAD_PAGE_TEXT)
    }
    if (resource.thumbnail.state === "available" && resource.thumbnail.imageRef) {
        return h("div.thumb", {}, h("img", { src: resource.thumbnail.imageRef, alt: resource.title }))
    }
    return h("div.thumb.pending", {}, "thumbnail pending")
}

function tile(resource: ResourceView, props: GroupScreenProps): VNode {
    const selected = props.selection.includes(resource.id)
    return h(
        "div.tile",
        { "data-resource": resource.id },
        h("input.select-box", {
            type: "checkbox",
            ...(selected ? { checked: "checked" } : {}),
            onchange: () => props.onToggleSelect(resource.id),
        }),
        thumbnail(resource),
        h(
            "a.tile-title",
            { href: "#", onclick: () => props.onOpenResource(resource.id) },
            resource.title || resource.originalUrl,
        ),
        h("div.tile-url", {}, resource.url),
        !props.group.readOnly &&
            h(
                "button.remove-resource",
                { onclick: () => props.onRemoveResource(resource.id) },
                "remove",
            ),
    )
}

function pager(props: GroupScreenProps): VNode | false {
    const pages = Math.max(1, Math.ceil(props.group.resourceCount / props.group.pageSize))
    if (pages === 1) return false
    const buttons = []
    for (let page = 1; page <= pages; page++) {
        buttons.push(
            h(
                `button.page${page === props.group.page ? ".current" : ""}`,
                { onclick: () => props.onPage(page) },
                String(page),
            ),
        )
    }
    return h("nav.pager", {}, buttons)
}

function activitySummary(events: ActivityEventView[]): VNode {
    return h(
        "section.activity",
        {},
        h("h3", {}, "Recent activity"),
        h(
            "ul",
            {},
            events.map((event) =>
                h("li.activity-event", {}, `${event.actor} ${event.kind} ${event.target} at ${event.at}`),
            ),
        ),
    )
}

export function renderGroupScreen(props: GroupScreenProps): VNode {
    const group = props.group
    const controls = group.readOnly
        ? [
              h("span.badge.read-only", {}, "read-only"),
              h("button.copy-group", { onclick: () => props.onCopyGroup() }, "Copy group"),
          ]
        : [
              h("button.copy-group", { onclick: () => props.onCopyGroup() }, "Copy group"),
              h(
                  "form.add-upload",
                  {
                      onsubmit: (event?: unknown) => {
                          ;(event as Event | undefined)?.preventDefault?.()
                          const url = (
                              document.getElementById("upload-url") as HTMLInputElement | null
                          )?.value
                          if (url) props.onAddUpload(url)
                      },
                  },
                  h("input", { id: "upload-url", placeholder: "suggest a URL" }),
                  h("button.add-resource", { type: "submit" }, "Add resource"),
              ),
          ]
    return h(
        "div.group-screen",
        { "data-group": group.id },
        h(
            "header.group-header",
            {},
            h("h2", {}, group.title),
            h("p.description", {}, group.description),
            h("div.controls", {}, controls),
        ),
        group.subgroups.length > 0 &&
            h(
                "ul.subgroups",
                {},
                group.subgroups.map((sub) =>
                    h("li.subgroup", {}, `${sub.title} (${sub.resourceCount})`),
                ),
            ),
        h("div.grid", {}, group.resources.map((resource) => tile(resource, props))),
        pager(props),
        activitySummary(props.activity),
    )
}
