// Browser bootstrap: owns the session, routes between pages, and wires
// delegated click/submit events into the page modules. Logic lives in
// the modules; this file only touches the DOM.

import { ApiError, InventoryApi, SessionInfo } from "./api.js";
import { Language, bundle } from "./i18n.js";
import {
  blankLogin,
  renderHelpPanel,
  renderLoginPage,
  renderMainMenu,
  renderSubmenu,
  renderWelcome,
} from "./pages.js";

const api = new InventoryApi((url, init) => fetch(url, init));

let session: SessionInfo | null = null;
let language: Language = "en";
let currentPage = "login";
const loginState = blankLogin(language);

function root(): HTMLElement {
  return document.getElementById("app") as HTMLElement;
}

function render(): void {
  const strings = bundle(language);
  if (!session) {
    root().innerHTML = renderLoginPage(loginState) +
      renderHelpPanel("login", language);
    return;
  }
  root().innerHTML =
    renderMainMenu(session, language) +
    renderSubmenu(currentPage, session, language) +
    (currentPage === "welcome" ? renderWelcome(language) : "") +
    renderHelpPanel(currentPage, language) +
    `<p>${strings.app_title}</p>`;
}

async function handleLogin(): Promise<void> {
  const username = (document.querySelector("input[name=username]") as HTMLInputElement)?.value ?? loginState.username;
  const password = (document.querySelector("input[name=password]") as HTMLInputElement)?.value ?? "";
  loginState.username = username;
  try {
    const outcome = await api.login(username, password);
    if (outcome.challenge) {
      loginState.challengeId = outcome.challenge.challenge_id;
    } else if (outcome.session) {
      session = outcome.session;
      language = (outcome.session.language as Language) ?? language;
      currentPage = "welcome";
    }
    loginState.error = null;
  } catch (error) {
    loginState.error = error instanceof ApiError
      ? bundle(language).login_failed
      : bundle(language).error_generic;
  }
  render();
}

async function handleBiometric(): Promise<void> {
  const sample = (document.querySelector("input[name=sample]") as HTMLInputElement)?.value ?? "";
  try {
    session = await api.completeBiometric(loginState.challengeId ?? "", sample);
    loginState.challengeId = null;
    currentPage = "welcome";
  } catch {
    loginState.error = bundle(language).error_generic;
  }
  render();
}

async function handleLogout(): Promise<void> {
  const farewell = await api.logout();
  session = null;
  currentPage = "login";
  render();
  const note = document.createElement("p");
  note.textContent = farewell; // "Bye."
  root().prepend(note);
}

document.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const page = target.getAttribute("data-page");
  const action = target.getAttribute("data-action");
  if (page === "logout") {
    event.preventDefault();
    void handleLogout();
  } else if (page) {
    event.preventDefault();
    currentPage = page;
    render();
  } else if (action === "login") {
    event.preventDefault();
    void handleLogin();
  } else if (action === "biometric") {
    event.preventDefault();
    void handleBiometric();
  }
});

document.addEventListener("DOMContentLoaded", render);
