import requests

APP_KEY = 'demo-app-key'
HEADERS = {'hue-application-key': APP_KEY}


def list_lights():
    resp = requests.get('https://hue-bridge.local/clip/v2/resource/light', headers=HEADERS)
    return resp.json()
