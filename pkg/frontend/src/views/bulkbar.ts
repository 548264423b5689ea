/**
 * Bulk action bar: appears while a selection exists, runs bulk tag /
 * add-to-group, and renders the server's per-item partial-failure
 * report ("5 applied, 2 skipped (read-only)").
 */

import { BulkTagResponse } from "../api.js"
import { h, VNode } from "../vdom.js"

export interface BulkBarProps {
    selection: string[]
    report: BulkTagResponse | null
    groupChoices: { id: string; title: string }[]
    onBulkTag: (label: string) => void
    onAddToGroup: (groupId: string) => void
    onClear: () => void
}

export function formatBulkReport(report: BulkTagResponse): string {
    const readOnlySkips = report.errors.filter((e) => e.code === "readOnlyViolation").length
    const otherSkips = report.errors.length - readOnlySkips
    let text = `${report.appliedCount} applied`
    if (readOnlySkips > 0) text += `, ${readOnlySkips} skipped (read-only)`
    if (otherSkips > 0) text += `, ${otherSkips} failed`
    return text
}

export function renderBulkBar(props: BulkBarProps): VNode | null {
    if (props.selection.length === 0) return null
    return h(
        "div.bulk-bar",
        {},
        h("span.selection-count", {}, `${props.selection.length} selected`),
        h(
            "form.bulk-tag",
            {
                onsubmit: (event?: unknown) => {
                    ;(event as Event | undefined)?.preventDefault?.()
                    const input = document.getElementById("bulk-tag-input") as HTMLInputElement | null
                    if (input?.value) props.onBulkTag(input.value)
                },
            },
            h("input", { id: "bulk-tag-input", placeholder: "tag label" }),
            h("button.bulk-tag-submit", { type: "submit" }, "Tag selected"),
        ),
        props.groupChoices.length > 0 &&
            h(
                "span.add-to-group",
                {},
                props.groupChoices
                    .slice(0, 5)
                    .map((group) =>
                        h(
                            "button.add-to-group-choice",
                            { onclick: () => props.onAddToGroup(group.id) },
                            `→ ${group.title}`,
                        ),
                    ),
            ),
        h("button.clear-selection", { onclick: () => props.onClear() }, "Clear"),
        props.report && h("span.bulk-report", {}, formatBulkReport(props.report)),
    )
}
