import { describe, expect, it } from "vitest"

import { byClass, byTag, hasClass, textOf } from "../src/vdom.js"
import { DEAD_PAGE_TEXT, renderGroupScreen } from "../src/views/group.js"
import { groupCallbacks, recorded, RecordedApi } from "./helpers.js"

const api = new RecordedApi()

async function renderGroup(groupId: string, page = 1) {
    const group = await api.getGroup(groupId, page)
    const activity = await api.getActivity(groupId)
    return renderGroupScreen({ group, activity, selection: [], ...groupCallbacks })
}

describe("group screen on a read-only imported collection", () => {
    it("renders no mutating controls", async () => {
        const tree = await renderGroup(recorded.meta.readOnlyGroup)
        expect(byClass(tree, "add-resource")).toHaveLength(0)
        expect(byClass(tree, "remove-resource")).toHaveLength(0)
        expect(byClass(tree, "add-upload")).toHaveLength(0)
    })

    it("offers copy-group instead", async () => {
        const tree = await renderGroup(recorded.meta.readOnlyGroup)
        expect(byClass(tree, "copy-group")).toHaveLength(1)
        expect(byClass(tree, "read-only")).not.toHaveLength(0)
    })

    it("shows the exact dead-page placeholder text", async () => {
        const tree = await renderGroup(recorded.meta.readOnlyGroup)
        const dead = byClass(tree, "dead")
        expect(dead).toHaveLength(1)
        expect(textOf(dead[0])).toBe("The page is no longer available on the web")
        expect(DEAD_PAGE_TEXT).toBe("The page is no longer available on the web")
    })

    it("renders every tile from the server payload", async () => {
        const group = await api.getGroup(recorded.meta.readOnlyGroup)
        const tree = await renderGroup(recorded.meta.readOnlyGroup)
        expect(byClass(tree, "tile")).toHaveLength(group.resources.length)
    })
})

describe("group screen on an editable group", () => {
    it("shows mutating controls", async () => {
        const tree = await renderGroup(recorded.meta.editableGroup)
        expect(byClass(tree, "add-resource")).toHaveLength(1)
        expect(byClass(tree, "remove-resource").length).toBeGreaterThan(0)
    })

    it("pages 13 resources as two grid pages", async () => {
        const page1 = await renderGroup(recorded.meta.editableGroup, 1)
        expect(byClass(page1, "tile")).toHaveLength(12)
        const pager = byClass(page1, "pager")
        expect(pager).toHaveLength(1)
        expect(byTag(pager[0], "button")).toHaveLength(2)

        const page2 = await renderGroup(recorded.meta.editableGroup, 2)
        expect(byClass(page2, "tile")).toHaveLength(1)
    })

    it("marks the current page in the pager", async () => {
        const page2 = await renderGroup(recorded.meta.editableGroup, 2)
        const current = byClass(page2, "current")
        expect(current).toHaveLength(1)
        expect(textOf(current[0])).toBe("2")
    })
})

describe("activity summary", () => {
    it("renders the server's activity events verbatim", async () => {
        const activity = await api.getActivity(recorded.meta.editableGroup)
        const tree = await renderGroup(recorded.meta.editableGroup)
        const rows = byClass(tree, "activity-event")
        expect(rows).toHaveLength(activity.length)
        expect(textOf(rows[0])).toContain(activity[0].kind)
        expect(textOf(rows[0])).toContain(activity[0].actor)
    })

    it("includes resourceAdded and groupCreated kinds from the recording", async () => {
        const activity = await api.getActivity(recorded.meta.editableGroup)
        const kinds = new Set(activity.map((e) => e.kind))
        expect(kinds.has("resourceAdded")).toBe(true)
    })
})

describe("selection boxes", () => {
    it("marks selected tiles", async () => {
        const group = await api.getGroup(recorded.meta.editableGroup)
        const selectedId = group.resources[0].id
        const tree = renderGroupScreen({
            group,
            activity: [],
            selection: [selectedId],
            ...groupCallbacks,
        })
        const boxes = byClass(tree, "select-box")
        expect(boxes.some((box) => box.attrs["checked"] === "checked")).toBe(true)
        const tile = byClass(tree, "tile").find((t) => t.attrs["data-resource"] === selectedId)
        expect(tile && hasClass(byClass(tile, "select-box")[0], "select-box")).toBe(true)
    })
})
