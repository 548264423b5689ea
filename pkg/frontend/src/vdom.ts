/**
 * Minimal typed virtual DOM.
 *
 * Views are pure functions from server data to a VNode tree; the tree
 * mounts to real DOM in the browser and is directly assertable in node
 * tests without a DOM emulator.
 */

export type Handler = (event?: unknown) => void

export interface VNode {
    tag: string
    attrs: Record<string, string>
    on: Record<string, Handler>
    children: VChild[]
}

export type VChild = VNode | string

type HArg = VChild | null | undefined | false | HArg[]

function flatten(args: HArg[], out: VChild[]): VChild[] {
    for (const arg of args) {
        if (arg === null || arg === undefined || arg === false) continue
        if (Array.isArray(arg)) flatten(arg, out)
        else out.push(arg)
    }
    return out
}

/** `h("button.primary", {title: "x", onclick: fn}, "Save")` */
export function h(
    selector: string,
    attrs?: Record<string, string | Handler | undefined>,
    ...children: HArg[]
): VNode {
    const [tag, ...classes] = selector.split(".")
    const node: VNode = { tag: tag || "div", attrs: {}, on: {}, children: flatten(children, []) }
    if (classes.length > 0) node.attrs["class"] = classes.join(" ")
    for (const [key, value] of Object.entries(attrs ?? {})) {
        if (value === undefined) continue
        if (key.startsWith("on") && typeof value === "function") {
            node.on[key.slice(2)] = value
        } else if (typeof value === "string") {
            if (key === "class" && node.attrs["class"]) {
                node.attrs["class"] += " " + value
            } else {
                node.attrs[key] = value
            }
        }
    }
    return node
}

/** Browser-side mount; requires a real `document`. */
export function toDom(node: VChild): Node {
    if (typeof node === "string") return document.createTextNode(node)
    const el = document.createElement(node.tag)
    for (const [key, value] of Object.entries(node.attrs)) el.setAttribute(key, value)
    for (const [event, handler] of Object.entries(node.on)) el.addEventListener(event, handler)
    for (const child of node.children) el.appendChild(toDom(child))
    return el
}

// ---- tree queries (shared by app code and tests) ----

export function findAll(root: VChild, pred: (node: VNode) => boolean): VNode[] {
    const found: VNode[] = []
    const walk = (node: VChild): void => {
        if (typeof node === "string") return
        if (pred(node)) found.push(node)
        node.children.forEach(walk)
    }
    walk(root)
    return found
}

export function hasClass(node: VNode, cls: string): boolean {
    return (node.attrs["class"] ?? "").split(" ").includes(cls)
}

export function byClass(root: VChild, cls: string): VNode[] {
    return findAll(root, (n) => hasClass(n, cls))
}

export function byTag(root: VChild, tag: string): VNode[] {
    return findAll(root, (n) => n.tag === tag)
}

export function textOf(node: VChild): string {
    if (typeof node === "string") return node
    return node.children.map(textOf).join("")
}
