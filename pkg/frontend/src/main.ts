import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { render } from "./render.js";
import { choiceForKey } from "./types.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const app = new App(new ApiClient(""));
app.onChange = () => render(app, root);

document.addEventListener("keydown", (event) => {
  if (app.screen.kind !== "task") return;
  const target = event.target as HTMLElement | null;
  if (target && target.tagName === "INPUT") return;
  const choice = choiceForKey(event.key);
  if (choice) void app.vote(choice);
});

render(app, root);
