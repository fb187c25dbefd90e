import { ApiClient } from "./api";
import { App } from "./app";
import "./style.css";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app root element");

const api = new ApiClient();
api.onBundleChange = () => location.reload();

const app = new App(root, api);
void app.init();

window.addEventListener("hashchange", () => {
  void new App(root, api).init();
});
