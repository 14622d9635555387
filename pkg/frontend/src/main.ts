import { wireUp } from "./app.js";

document.addEventListener("DOMContentLoaded", wireUp);
