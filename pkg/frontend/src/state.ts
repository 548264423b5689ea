/** Client view state; everything rendered comes from server responses. */

export interface FacetSelection {
    dimension: string
    value: string
}

export interface ViewState {
    query: string
    facets: FacetSelection[]
    includeLive: boolean
    selectedGroup: string | null
    selectedResource: string | null
    selection: string[]
}

export function initialState(): ViewState {
    return {
        query: "",
        facets: [],
        includeLive: false,
        selectedGroup: null,
        selectedResource: null,
        selection: [],
    }
}

export function toggleSelection(state: ViewState, resourceId: string): ViewState {
    const selection = state.selection.includes(resourceId)
        ? state.selection.filter((id) => id !== resourceId)
        : [...state.selection, resourceId]
    return { ...state, selection }
}

export function clearSelection(state: ViewState): ViewState {
    return { ...state, selection: [] }
}

export function toggleFacet(state: ViewState, dimension: string, value: string): ViewState {
    const active = state.facets.some((f) => f.dimension === dimension && f.value === value)
    const facets = active
        ? state.facets.filter((f) => !(f.dimension === dimension && f.value === value))
        : [...state.facets, { dimension, value }]
    return { ...state, facets }
}

/**
 * Discards stale responses: only the most recently begun request may
 * apply its result.
 */
export class StaleGuard {
    private seq = 0

    begin(): number {
        return ++this.seq
    }

    isCurrent(ticket: number): boolean {
        return ticket === this.seq
    }
}
