// DOM rendering for the app screens. The two translation panes are marked
// dir="rtl" because the target language is written right to left.

import { App } from "./app.js";
import { progressPercent } from "./types.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function render(app: App, root: HTMLElement): void {
  const screen = app.screen;
  if (screen.kind === "login") {
    root.innerHTML = `
      <div class="card login">
        <h1>Translation preference annotation</h1>
        <p>Compare two translations of each sentence and pick the better one.</p>
        ${screen.error ? `<p class="error">${esc(screen.error)}</p>` : ""}
        <form id="login-form">
          <input id="annotator-input" placeholder="annotator id" autofocus />
          <button type="submit">Start</button>
        </form>
      </div>`;
    const form = root.querySelector("#login-form") as HTMLFormElement;
    const input = root.querySelector("#annotator-input") as HTMLInputElement;
    input.value = localStorage.getItem("annotator") ?? "";
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      localStorage.setItem("annotator", input.value.trim());
      void app.start(input.value);
    });
    return;
  }

  if (screen.kind === "done") {
    root.innerHTML = `
      <div class="card">
        <h1>All items rated</h1>
        <p>Thank you! Every item in your queue has a vote.</p>
        <p><a href="${esc(app.summaryUrl())}">View the running summary</a></p>
      </div>`;
    return;
  }

  const { view, banner, busy } = screen;
  const percent = progressPercent(view.progress);
  root.innerHTML = `
    <div class="card task">
      <div class="progress"><div class="bar" style="width:${percent}%"></div></div>
      <p class="counter">${view.progress.done} / ${view.progress.total}</p>
      <section class="source">
        <h2>Source</h2>
        <p>${esc(view.sourceText)}</p>
      </section>
      <div class="panes">
        <section class="pane">
          <h2>Translation 1</h2>
          <p dir="rtl" lang="ur">${esc(view.leftText)}</p>
        </section>
        <section class="pane">
          <h2>Translation 2</h2>
          <p dir="rtl" lang="ur">${esc(view.rightText)}</p>
        </section>
      </div>
      ${banner ? `<p class="banner">${esc(banner)} <button id="retry">Retry</button></p>` : ""}
      <div class="votes">
        <button id="vote-left" ${busy ? "disabled" : ""}>1 - Left is better</button>
        <button id="vote-same" ${busy ? "disabled" : ""}>2 - Same quality</button>
        <button id="vote-right" ${busy ? "disabled" : ""}>3 - Right is better</button>
      </div>
    </div>`;
  root.querySelector("#vote-left")?.addEventListener("click", () => void app.vote("LEFT"));
  root.querySelector("#vote-same")?.addEventListener("click", () => void app.vote("SAME"));
  root.querySelector("#vote-right")?.addEventListener("click", () => void app.vote("RIGHT"));
  root.querySelector("#retry")?.addEventListener("click", () => void app.retry());
}
