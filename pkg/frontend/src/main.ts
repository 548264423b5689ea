/** Browser bootstrap: read config, build the client, start the app. */

import { HttpApiClient } from "./api.js"
import { App } from "./app.js"

interface AppConfig {
    apiBaseUrl: string
    token: string
}

declare global {
    interface Window {
        ARCHIVECURATOR_CONFIG?: AppConfig
    }
}

function readConfig(): AppConfig {
    if (window.ARCHIVECURATOR_CONFIG) return window.ARCHIVECURATOR_CONFIG
    const params = new URLSearchParams(window.location.search)
    return {
        apiBaseUrl: params.get("api") ?? "http://127.0.0.1:8080",
        token: params.get("token") ?? "dev-token",
    }
}

const config = readConfig()
const root = document.getElementById("app")
if (root) {
    const app = new App(new HttpApiClient(config.apiBaseUrl, config.token), root)
    void app.start()
}
