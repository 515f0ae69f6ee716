/**
 * Entry point.  URL parameters: ?api=<service base> (default same origin
 * :8821) and either ?session=<id> to open an existing session or nothing,
 * which shows the CSV upload form.
 */

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { Workbench } from "./state.js";

function uploadForm(root: HTMLElement, onReady: (sessionId: string) => void, api: ApiClient): void {
  root.innerHTML = `
    <h2>new clustering session</h2>
    <p><textarea data-role="csv" rows="8" cols="60" placeholder="paste CSV rows"></textarea></p>
    <p>
      <label>kind <select data-role="kind"><option>numeric</option><option>categorical</option></select></label>
      <label>label column <input data-role="labelcol" type="number" style="width:4em"></label>
      <label>sigma <input data-role="sigma" value="auto" style="width:6em"></label>
    </p>
    <p><button data-act="create">upload &amp; embed</button> <span data-role="msg"></span></p>
  `;
  const msg = root.querySelector('[data-role="msg"]')!;
  root.querySelector('[data-act="create"]')!.addEventListener("click", async () => {
    try {
      const csv = root.querySelector<HTMLTextAreaElement>('[data-role="csv"]')!.value;
      const kind = root.querySelector<HTMLSelectElement>('[data-role="kind"]')!.value as "numeric" | "categorical";
      const labelRaw = root.querySelector<HTMLInputElement>('[data-role="labelcol"]')!.value;
      const sigmaRaw = root.querySelector<HTMLInputElement>('[data-role="sigma"]')!.value;
      msg.textContent = "uploading...";
      const ds = await api.uploadDataset(csv, {
        attr_kind: kind,
        label_column: labelRaw === "" ? undefined : Number(labelRaw),
      });
      const sigma = sigmaRaw === "auto" ? ("auto" as const) : Number(sigmaRaw);
      const resp = await api.createSession({ dataset: ds.dataset, sigma, dim: 1, method: "classical" });
      if (resp.session) {
        onReady(resp.session);
        return;
      }
      msg.textContent = `embedding job ${resp.job} running...`;
      const poll = setInterval(async () => {
        const st = await api.jobStatus(resp.job!);
        if (st.status === "done" && st.session) {
          clearInterval(poll);
          onReady(st.session);
        } else if (st.status === "failed") {
          clearInterval(poll);
          msg.textContent = `job failed: ${st.error}`;
        }
      }, 1000);
    } catch (err) {
      msg.textContent = String(err);
    }
  });
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const base = params.get("api") ?? `${location.protocol}//${location.hostname}:8821`;
  const api = new ApiClient(base);
  const root = document.getElementById("app")!;
  const open = async (sessionId: string) => {
    history.replaceState(null, "", `?api=${encodeURIComponent(base)}&session=${sessionId}`);
    const bench = new Workbench(api);
    const app = new App(bench, root);
    await bench.openSession(sessionId);
    app.redraw();
  };
  const sessionId = params.get("session");
  if (sessionId) {
    await open(sessionId);
  } else {
    uploadForm(root, open, api);
  }
}

void boot();
